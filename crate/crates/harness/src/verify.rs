//! Checks recorded traces against the certificates that apply to them.

use heavyball::certificates::{
    bound_gd, bound_hb_best_beta, bound_hb_fl, bound_hb_tv, bound_nesterov_fl, rate_smu,
    region_hb_fl, region_hb_smu, region_polyak, BoundBranch, BoundCurve, BoundTarget,
    LinearRateCertificate, RegionVerdict,
};
use heavyball::{MethodConfig, ObjectiveOracle, Trace, TraceRecord};
use serde::{Deserialize, Serialize};

pub const DEFAULT_REL_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Relative tolerance on every bound.
    pub rel_slack: f64,
    /// Multiplies every certificate coefficient. `1.0` except in negative
    /// controls, where `0.5` must produce violations.
    pub tamper: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            rel_slack: DEFAULT_REL_SLACK,
            tamper: 1.0,
        }
    }
}

/// One bound compared with one trace quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound_name: String,
    pub target: BoundTarget,
    pub coefficient: f64,
    /// Contraction factor for linear-rate bounds.
    pub rate: Option<f64>,
    /// `min_k (bound(k) − observed(k))`; negative means the bound was crossed.
    pub max_violation: f64,
    /// First recorded `k` beyond the tolerance.
    pub first_violating_k: Option<usize>,
    pub checked: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method_label: String,
    pub method: MethodConfig,
    pub regions: Vec<RegionVerdict>,
    /// False when no certificate applies; the run is plotted only.
    pub certified: bool,
    pub note: Option<String>,
    pub diverged_at: Option<usize>,
    pub checks: Vec<BoundCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub oracle_id: String,
    pub pass: bool,
    pub methods: Vec<MethodReport>,
}

impl VerificationReport {
    pub fn new(oracle_id: &str, methods: Vec<MethodReport>) -> Self {
        Self {
            oracle_id: oracle_id.to_string(),
            pass: methods.iter().all(|m| m.pass),
            methods,
        }
    }
}

pub fn branch_name(b: BoundBranch) -> &'static str {
    match b {
        BoundBranch::HbShortStep => "hb_convex_short_step",
        BoundBranch::HbLongStep => "hb_convex_long_step",
        BoundBranch::HbBestBeta => "hb_best_beta",
        BoundBranch::HbTimeVarying => "hb_time_varying",
        BoundBranch::NesterovConvex => "nesterov_convex",
        BoundBranch::GradientBaseline => "gd_baseline",
    }
}

pub fn observed(target: BoundTarget, r: &TraceRecord) -> f64 {
    match target {
        BoundTarget::Cesaro => r.cesaro_gap,
        BoundTarget::Iterate => r.f_gap,
        BoundTarget::Best => r.best_gap,
    }
}

/// Compares `observed(target)` with `bound(k)` on every record. A record
/// violates when it exceeds `bound·(1 + rel) + abs`.
pub fn check_records(
    name: impl Into<String>,
    target: BoundTarget,
    records: &[TraceRecord],
    bound: impl Fn(usize) -> f64,
    rel: f64,
    abs: f64,
) -> BoundCheck {
    let mut worst = f64::INFINITY;
    let mut first = None;
    for r in records {
        let b = bound(r.k);
        let obs = observed(target, r);
        worst = worst.min(b - obs);
        if first.is_none() && !(obs <= b + rel * b.abs() + abs) {
            first = Some(r.k);
        }
    }
    BoundCheck {
        bound_name: name.into(),
        target,
        coefficient: f64::NAN,
        rate: None,
        max_violation: worst,
        first_violating_k: first,
        checked: records.len(),
        pass: first.is_none(),
    }
}

/// `C/(k+1)` decay bound on the quantity named by the curve's target.
pub fn check_decay(trace: &Trace, curve: &BoundCurve, opts: &VerifyOptions) -> BoundCheck {
    let curve = curve.scaled(opts.tamper);
    BoundCheck {
        coefficient: curve.coefficient,
        ..check_records(
            branch_name(curve.branch),
            curve.target,
            &trace.records,
            |k| curve.at(k),
            opts.rel_slack,
            0.0,
        )
    }
}

/// `q^k · C` bound on `f(x_k) − f★`; `resolution` is the smallest gap the
/// iteration can resolve in floating point.
pub fn check_linear(
    trace: &Trace,
    cert: &LinearRateCertificate,
    resolution: f64,
    opts: &VerifyOptions,
) -> BoundCheck {
    let cert = cert.scaled(opts.tamper);
    BoundCheck {
        coefficient: cert.coefficient,
        rate: Some(cert.q),
        ..check_records(
            "hb_linear_rate",
            BoundTarget::Iterate,
            &trace.records,
            |k| cert.bound(k),
            opts.rel_slack,
            resolution,
        )
    }
}

fn describe(verdicts: &[RegionVerdict]) -> String {
    verdicts
        .iter()
        .map(|v| format!("{}: {}", v.region, v.describe()))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Runs every certificate that applies to `trace`'s method on `oracle`.
pub fn verify_trace(oracle: &ObjectiveOracle, trace: &Trace, opts: &VerifyOptions) -> MethodReport {
    let l = oracle.lipschitz();
    let mu = oracle.mu();
    let (r0, f0) = trace
        .records
        .first()
        .filter(|r| r.k == 0)
        .map_or((f64::NAN, f64::NAN), |r| (r.dist, r.f_gap));

    let mut regions = Vec::new();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    match trace.method {
        MethodConfig::GradientDescent { alpha } | MethodConfig::HeavyBall { alpha, .. } => {
            let beta = match trace.method {
                MethodConfig::HeavyBall { beta, .. } => beta,
                _ => 0.0,
            };
            let fl = region_hb_fl(l, alpha, beta).ok();
            regions.extend(fl);
            if fl.is_some_and(|v| v.inside) {
                if let Ok(curve) = bound_hb_fl(l, alpha, beta, r0) {
                    checks.push(check_decay(trace, &curve, opts));
                }
            }
            if alpha <= 1.0 / l {
                if beta == 0.0 {
                    if let Ok(curve) = bound_gd(l, alpha, r0) {
                        checks.push(check_decay(trace, &curve, opts));
                    }
                }
                let best = 1.0 - (alpha * l).sqrt();
                if (beta - best).abs() <= 1e-12 {
                    if let Ok((_, curve)) = bound_hb_best_beta(alpha, l, r0) {
                        checks.push(check_decay(trace, &curve, opts));
                    }
                }
            }
            if let Some(mu) = mu {
                let smu = region_hb_smu(l, mu, alpha, beta).ok();
                regions.extend(smu);
                regions.extend(region_polyak(l, alpha, beta).ok());
                match rate_smu(l, mu, alpha, beta) {
                    Ok(cert) => {
                        let cert = cert.with_initial(f0, 0.0);
                        checks.push(check_linear(
                            trace,
                            &cert,
                            oracle.gap_resolution(alpha),
                            opts,
                        ));
                    }
                    Err(e) if smu.is_some_and(|v| v.inside) => {
                        notes.push(format!("linear rate: {e}"))
                    }
                    Err(_) => {}
                }
            }
        }
        MethodConfig::HeavyBallTv { alpha0 } => {
            if alpha0 <= 1.0 / l {
                if let Ok(curve) = bound_hb_tv(alpha0, r0) {
                    checks.push(check_decay(trace, &curve, opts));
                }
            } else {
                notes.push(format!("alpha0={alpha0} exceeds 1/L"));
            }
        }
        MethodConfig::Nesterov { beta } => match bound_nesterov_fl(l, beta, f0, r0) {
            Ok(curve) => checks.push(check_decay(trace, &curve, opts)),
            Err(e) => notes.push(e.to_string()),
        },
    }

    let certified = !checks.is_empty();
    if !certified {
        let mut msg = "no certificate".to_string();
        if !regions.is_empty() {
            msg = format!("{msg} ({})", describe(&regions));
        }
        notes.insert(0, msg);
    }
    if let Some(k) = trace.diverged_at {
        notes.push(format!("diverged at k={k}"));
    }
    MethodReport {
        method_label: trace.method_label.clone(),
        method: trace.method,
        regions,
        certified,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
        diverged_at: trace.diverged_at,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use heavyball::objectives::{make_counterexample, make_moreau, MoreauEnvelopeSpec};
    use heavyball::{run, RunSpec};

    fn moreau() -> ObjectiveOracle {
        make_moreau(MoreauEnvelopeSpec { c: 5.0, n: 4 }).unwrap()
    }

    fn trace_for(oracle: &ObjectiveOracle, m: MethodConfig, x0: Vec<f64>, t: usize) -> Trace {
        run(oracle, &m, &RunSpec::new(x0, t)).unwrap()
    }

    #[test]
    fn gd_unit_step_baseline() {
        let o = moreau();
        let t = trace_for(
            &o,
            MethodConfig::GradientDescent { alpha: 1.0 },
            vec![1.0; 4],
            2000,
        );
        let rep = verify_trace(&o, &t, &VerifyOptions::default());
        assert!(rep.pass && rep.certified);
        let base = rep
            .checks
            .iter()
            .find(|c| c.bound_name == "gd_baseline")
            .unwrap();
        // C = L·R0²/2 with L = 1, R0 = 2
        assert!((base.coefficient - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tampered_bound_is_violated() {
        let o = moreau();
        let t = trace_for(
            &o,
            MethodConfig::GradientDescent { alpha: 1.0 },
            vec![1.0; 4],
            2000,
        );
        let opts = VerifyOptions {
            tamper: 0.5,
            ..Default::default()
        };
        let rep = verify_trace(&o, &t, &opts);
        assert!(!rep.pass);
        let c = rep.checks.iter().find(|c| !c.pass).unwrap();
        assert!(c.max_violation < 0.0);
        assert!(c.first_violating_k.is_some());
    }

    #[test]
    fn boundary_parameters_are_not_certified() {
        let o = moreau();
        let t = trace_for(
            &o,
            MethodConfig::HeavyBall {
                alpha: 1.0,
                beta: 0.5,
            },
            vec![1.0; 4],
            100,
        );
        let rep = verify_trace(&o, &t, &VerifyOptions::default());
        assert!(!rep.certified && rep.pass && rep.checks.is_empty());
        assert!(
            rep.note.as_deref().unwrap().contains("boundary"),
            "{:?}",
            rep.note
        );
    }

    #[test]
    fn strongly_convex_gets_linear_rate() {
        let o = make_counterexample();
        let t = trace_for(
            &o,
            MethodConfig::HeavyBall {
                alpha: 1.9 / 50.0,
                beta: 0.05,
            },
            vec![1.0],
            500,
        );
        let rep = verify_trace(&o, &t, &VerifyOptions::default());
        assert!(rep.pass, "{rep:?}");
        assert!(rep.checks.iter().any(|c| c.rate.is_some()));
        assert_eq!(rep.regions.len(), 3);
    }

    #[test]
    fn check_records_reports_first_violation() {
        let recs: Vec<TraceRecord> = (0..5)
            .map(|k| TraceRecord {
                k,
                f_gap: if k == 3 { 2.0 } else { 0.5 },
                cesaro_gap: 0.0,
                best_gap: 0.0,
                grad_norm: 0.0,
                dist: 0.0,
                alpha_k: 0.0,
                beta_k: 0.0,
            })
            .collect();
        let c = check_records("unit", BoundTarget::Iterate, &recs, |_| 1.0, 1e-9, 0.0);
        assert_eq!(c.first_violating_k, Some(3));
        assert_eq!(c.max_violation, -1.0);
        assert!(!c.pass);
    }
}
