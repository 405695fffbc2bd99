//! Closed-form stability regions, decay bounds and linear-rate certificates
//! for the Heavy-ball family, plus an empirical rate fit for cross-checks.

mod bounds;
mod empirical;
mod lemma;
mod rate;
mod regions;

pub use bounds::{
    bound_gd, bound_hb_best_beta, bound_hb_fl, bound_hb_tv, bound_nesterov_fl, seam_coefficients,
    BoundBranch, BoundCurve, BoundInputs, BoundTarget,
};
pub use empirical::{empirical_rate, fit_rate, EmpiricalRate, RATE_FIT_FLOOR};
pub use lemma::{lemma1_factor, lemma1_recurrence_oracle, Lemma1Params, LinearRateCertificate};
pub use rate::{
    certificate_at, identify, rate_smu, rate_smu_with_grid, theta_interval, DEFAULT_THETA_GRID,
};
pub use regions::{
    hb_smu_beta_limit, polyak_optimal_params, region_hb_fl, region_hb_smu, region_polyak,
    RegionName, RegionVerdict,
};
