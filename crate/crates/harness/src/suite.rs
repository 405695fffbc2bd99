//! Aggregate property suite behind `hbcert verify`.
//!
//! Every check is deterministic in `(seed, instances)`: instance parameters
//! are drawn sequentially from a per-check generator before any parallel
//! work starts.

use std::time::Instant;

use heavyball::certificates::{
    bound_hb_fl, bound_hb_tv, bound_nesterov_fl, empirical_rate, hb_smu_beta_limit, lemma1_factor,
    lemma1_recurrence_oracle, rate_smu, Lemma1Params,
};
use heavyball::objectives::{
    finite_diff_check, make_counterexample, make_moreau, make_quadratic, random_quadratic,
    MoreauEnvelopeSpec, ObjectiveKind, QuadraticSpec,
};
use heavyball::{run, MethodConfig, ObjectiveOracle, RunSpec, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::region::scan;
use crate::reproduce::{compute_fig1, compute_fig3};
use crate::verify::{check_decay, check_linear, BoundCheck, VerifyOptions};

pub const DEFAULT_SEED: u64 = 20_170_101;
pub const DEFAULT_INSTANCES: usize = 100;

const CONVEX_T: usize = 5000;
const LINEAR_K: usize = 2000;
const RATE_TAIL: f64 = 0.5;
const RATE_TOL: f64 = 1e-3;
const LEMMA_SETS: usize = 1000;
const LEMMA_K: usize = 1000;
const LEMMA_SPLITS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const LEMMA_BUDGET_S: f64 = 10.0;
const FD_STEP: f64 = 1e-5;
const FD_TOL: f64 = 1e-5;
const FD_POINTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Number of random instances for the trace checks (at least 1).
    pub instances: usize,
    /// Coefficient multiplier; values below 1 are a negative control.
    pub tamper: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            instances: DEFAULT_INSTANCES,
            tamper: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub checks: usize,
    pub failures: usize,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub instances: usize,
    pub tamper: f64,
    pub pass: bool,
    pub criteria: Vec<CriterionResult>,
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "heavy-ball convex Cesaro bound"),
    (2, "time-varying heavy-ball last-iterate bound"),
    (3, "Nesterov Cesaro bound"),
    (4, "heavy-ball linear rate"),
    (5, "special-factor rate"),
    (6, "counterexample reproduction"),
    (7, "region properties"),
    (8, "recurrence oracle equivalence"),
    (9, "gradient correctness"),
    (10, "Moreau envelope qualitative reproduction"),
];

struct Outcome {
    pass: bool,
    checks: usize,
    failures: usize,
    detail: String,
}

pub fn run_criterion(id: u8, opts: &SuiteOptions) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, n)| n)
        .to_string();
    let start = Instant::now();
    let out = match id {
        1 => hb_convex(opts),
        2 => hb_time_varying(opts),
        3 => nesterov(opts),
        4 => linear_rate(opts),
        5 => special_factor(opts),
        6 => counterexample(),
        7 => regions(),
        8 => lemma(opts),
        9 => gradients(opts),
        10 => moreau_figure(),
        _ => Outcome {
            pass: false,
            checks: 0,
            failures: 1,
            detail: format!("no criterion {id}"),
        },
    };
    CriterionResult {
        id,
        name,
        pass: out.pass,
        checks: out.checks,
        failures: out.failures,
        detail: out.detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, opts))
        .collect();
    SuiteReport {
        seed: opts.seed,
        instances: opts.instances,
        tamper: opts.tamper,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    }
}

fn rng_for(opts: &SuiteOptions, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn verify_opts(opts: &SuiteOptions) -> VerifyOptions {
    VerifyOptions {
        tamper: opts.tamper,
        ..VerifyOptions::default()
    }
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Moreau envelopes with `c` cycling over {1, 5, 20}, `n ∈ 1..=50` and
/// `‖x₀‖ ∈ (0, 10]`.
pub fn moreau_instances(rng: &mut ChaCha8Rng, count: usize) -> Vec<(ObjectiveOracle, Vec<f64>)> {
    (0..count)
        .map(|i| {
            let c = [1.0, 5.0, 20.0][i % 3];
            let n = rng.gen_range(1..=50);
            let radius = 10.0 * (1.0 - rng.gen::<f64>());
            let x0 = random_direction(rng, n)
                .into_iter()
                .map(|v| v * radius)
                .collect();
            (
                make_moreau(MoreauEnvelopeSpec { c, n }).expect("valid Moreau parameters"),
                x0,
            )
        })
        .collect()
}

fn summarize(checks: &[BoundCheck], label: impl Fn(usize) -> String) -> Outcome {
    let failures = checks.iter().filter(|c| !c.pass).count();
    let first = checks.iter().position(|c| !c.pass);
    let tightest = checks
        .iter()
        .filter(|c| c.coefficient > 0.0)
        .map(|c| c.max_violation / c.coefficient)
        .fold(f64::INFINITY, f64::min);
    let detail = match first {
        None => format!(
            "{} traces within bound, min margin/C {tightest:.3e}",
            checks.len()
        ),
        Some(i) => format!(
            "{failures}/{} traces violate; first: {} at k={:?} (margin {:.3e})",
            checks.len(),
            label(i),
            checks[i].first_violating_k,
            checks[i].max_violation
        ),
    };
    Outcome {
        pass: failures == 0 && !checks.is_empty(),
        checks: checks.len(),
        failures,
        detail,
    }
}

/// Runs `method` on each instance and applies `check` to the trace.
fn convex_cells<M, C>(
    insts: &[(ObjectiveOracle, Vec<f64>)],
    methods: M,
    check: C,
) -> (Vec<BoundCheck>, Vec<String>)
where
    M: Fn(&ObjectiveOracle) -> Vec<MethodConfig> + Sync,
    C: Fn(&ObjectiveOracle, &Trace) -> BoundCheck + Sync,
{
    let cells: Vec<(usize, MethodConfig)> = insts
        .iter()
        .enumerate()
        .flat_map(|(i, (o, _))| methods(o).into_iter().map(move |m| (i, m)))
        .collect();
    let checks = cells
        .par_iter()
        .map(|(i, m)| {
            let (o, x0) = &insts[*i];
            let t = run(o, m, &RunSpec::new(x0.clone(), CONVEX_T)).expect("valid run");
            check(o, &t)
        })
        .collect();
    let labels = cells
        .iter()
        .map(|(i, m)| format!("{} {}", insts[*i].0.id(), m.label()))
        .collect();
    (checks, labels)
}

fn hb_convex(opts: &SuiteOptions) -> Outcome {
    let insts = moreau_instances(&mut rng_for(opts, 1), opts.instances);
    let vo = verify_opts(opts);
    let (checks, labels) = convex_cells(
        &insts,
        |o| {
            let l = o.lipschitz();
            [0.0, 0.25, 0.5, 0.75, 0.9]
                .iter()
                .flat_map(|&beta| {
                    [0.1, 0.4, 0.7, 0.95].map(|f| MethodConfig::HeavyBall {
                        alpha: f * 2.0 * (1.0 - beta) / l,
                        beta,
                    })
                })
                .collect()
        },
        |o, t| {
            let MethodConfig::HeavyBall { alpha, beta } = t.method else {
                unreachable!()
            };
            let curve =
                bound_hb_fl(o.lipschitz(), alpha, beta, t.records[0].dist).expect("inside region");
            check_decay(t, &curve, &vo)
        },
    );
    summarize(&checks, |i| labels[i].clone())
}

fn hb_time_varying(opts: &SuiteOptions) -> Outcome {
    let insts = moreau_instances(&mut rng_for(opts, 1), opts.instances);
    let vo = verify_opts(opts);
    let (checks, labels) = convex_cells(
        &insts,
        |o| {
            [0.25, 0.5, 1.0]
                .map(|f| MethodConfig::HeavyBallTv {
                    alpha0: f / o.lipschitz(),
                })
                .to_vec()
        },
        |_, t| {
            let MethodConfig::HeavyBallTv { alpha0 } = t.method else {
                unreachable!()
            };
            check_decay(
                t,
                &bound_hb_tv(alpha0, t.records[0].dist).expect("valid"),
                &vo,
            )
        },
    );
    summarize(&checks, |i| labels[i].clone())
}

fn nesterov(opts: &SuiteOptions) -> Outcome {
    let insts = moreau_instances(&mut rng_for(opts, 1), opts.instances);
    let vo = verify_opts(opts);
    let (checks, labels) = convex_cells(
        &insts,
        |_| {
            [0.0, 0.3, 0.7, 0.9]
                .map(|beta| MethodConfig::Nesterov { beta })
                .to_vec()
        },
        |o, t| {
            let MethodConfig::Nesterov { beta } = t.method else {
                unreachable!()
            };
            let r = &t.records[0];
            check_decay(
                t,
                &bound_nesterov_fl(o.lipschitz(), beta, r.f_gap, r.dist).expect("valid"),
                &vo,
            )
        },
    );
    summarize(&checks, |i| labels[i].clone())
}

/// Result of one linear-rate cell.
struct RateCell {
    label: String,
    check: BoundCheck,
    q: f64,
    q_hat: Option<f64>,
}

fn rate_cell(
    o: &ObjectiveOracle,
    x0: &[f64],
    alpha: f64,
    beta: f64,
    vo: &VerifyOptions,
) -> RateCell {
    let l = o.lipschitz();
    let mu = o.mu().expect("strongly convex");
    let m = MethodConfig::HeavyBall { alpha, beta };
    let t = run(o, &m, &RunSpec::new(x0.to_vec(), LINEAR_K)).expect("valid run");
    let cert = rate_smu(l, mu, alpha, beta)
        .expect("admissible parameters are certified")
        .with_initial(t.records[0].f_gap, 0.0);
    RateCell {
        label: format!("{} {}", o.id(), m.label()),
        check: check_linear(&t, &cert, o.gap_resolution(alpha), vo),
        q: cert.q,
        q_hat: empirical_rate(&t, RATE_TAIL).ok().map(|r| r.q_hat),
    }
}

fn rate_outcome(cells: &[RateCell], extra_failures: usize, extra: String) -> Outcome {
    let checks: Vec<BoundCheck> = cells.iter().map(|c| c.check.clone()).collect();
    let mut out = summarize(&checks, |i| cells[i].label.clone());
    let slow: Vec<&RateCell> = cells
        .iter()
        .filter(|c| c.q_hat.is_some_and(|q| q > c.q + RATE_TOL))
        .collect();
    let unfitted = cells.iter().filter(|c| c.q_hat.is_none()).count();
    let gap = cells
        .iter()
        .filter_map(|c| c.q_hat.map(|q| q - c.q))
        .fold(f64::NEG_INFINITY, f64::max);
    out.detail = format!(
        "{}; q_hat - q max {gap:.3e}, {} above tolerance, {unfitted} too fast to fit",
        out.detail,
        slow.len()
    );
    if let Some(c) = slow.first() {
        out.detail += &format!(" (first: {} q={} q_hat={:?})", c.label, c.q, c.q_hat);
    }
    if !extra.is_empty() {
        out.detail += &format!("; {extra}");
    }
    out.failures += slow.len() + extra_failures;
    out.checks += cells.len();
    out.pass = out.pass && slow.is_empty() && extra_failures == 0;
    out
}

fn linear_rate(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 4);
    let mut insts: Vec<(ObjectiveOracle, Vec<f64>)> = (0..opts.instances)
        .map(|i| {
            let l = [2.0, 10.0, 100.0][i % 3];
            let n = rng.gen_range(2..=20);
            let seed = rng.gen::<u64>();
            let o = random_quadratic(1.0, l, n, seed).expect("valid quadratic");
            let x0 = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            (o, x0)
        })
        .collect();
    insts.push((make_counterexample(), vec![rng.gen_range(-3.0..3.0)]));
    let cells: Vec<(usize, f64, f64)> = insts
        .iter()
        .enumerate()
        .flat_map(|(i, (o, _))| {
            let l = o.lipschitz();
            let mu = o.mu().expect("strongly convex");
            (0..10)
                .map(|_| {
                    let alpha = rng.gen_range(0.05..1.95) / l;
                    let beta = rng.gen_range(0.0..0.95) * hb_smu_beta_limit(l, mu, alpha);
                    (i, alpha, beta)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let vo = verify_opts(opts);
    let results: Vec<RateCell> = cells
        .par_iter()
        .map(|&(i, a, b)| rate_cell(&insts[i].0, &insts[i].1, a, b, &vo))
        .collect();
    rate_outcome(&results, 0, String::new())
}

fn special_factor(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 5);
    let per_l = (opts.instances / 10).max(1);
    let cells: Vec<(ObjectiveOracle, Vec<f64>, f64)> = [2.0, 10.0, 100.0]
        .iter()
        .flat_map(|&l| (0..per_l).map(move |_| l))
        .collect::<Vec<_>>()
        .into_iter()
        .flat_map(|l| {
            let n = rng.gen_range(2..=20);
            let o = random_quadratic(1.0, l, n, rng.gen()).expect("valid quadratic");
            let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            [0.2, 0.5, 1.0].map(|f| (o.clone(), x0.clone(), f / l))
        })
        .collect();
    let vo = verify_opts(opts);
    let results: Vec<(RateCell, f64)> = cells
        .par_iter()
        .map(|(o, x0, alpha)| {
            let (l, mu) = (o.lipschitz(), o.mu().expect("strongly convex"));
            let beta = ((1.0 - alpha * mu) * (1.0 - alpha * l)).sqrt();
            (rate_cell(o, x0, *alpha, beta, &vo), 1.0 - alpha * mu)
        })
        .collect();
    let off: Vec<String> = results
        .iter()
        .filter(|(c, want)| !((c.q - want).abs() <= 1e-12))
        .map(|(c, want)| format!("{} q={} expected {want}", c.label, c.q))
        .collect();
    // q_hat is compared with the certified factor, which must equal 1 − αμ
    let cells: Vec<RateCell> = results.into_iter().map(|(c, _)| c).collect();
    let extra = match off.first() {
        Some(first) => format!("{} certificates off 1-alpha*mu, first: {first}", off.len()),
        None => "certified q = 1-alpha*mu in every cell".to_string(),
    };
    rate_outcome(&cells, off.len(), extra)
}

fn counterexample() -> Outcome {
    let (_, runs) = match compute_fig3(crate::reproduce::FIG3_ITERATIONS) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                pass: false,
                checks: 0,
                failures: 1,
                detail: e.to_string(),
            }
        }
    };
    let mut parts = Vec::new();
    let mut failures = 0;
    let mut checks = 0;
    for r in &runs {
        if r.polyak {
            let judged = r.x0 == 1.0;
            let stuck = r.min_gap() >= 1e-3;
            parts.push(format!(
                "polyak x0={}: min gap {:.3e} ({}{})",
                r.x0,
                r.min_gap(),
                if stuck { "no convergence" } else { "converges" },
                if judged { "" } else { ", informational" }
            ));
            if judged {
                checks += 1;
                failures += usize::from(!stuck);
            }
        } else {
            checks += 1;
            let hit = r.first_below(1e-6);
            failures += usize::from(hit.is_none());
            parts.push(format!("admissible x0={}: below 1e-6 at k={hit:?}", r.x0));
        }
    }
    Outcome {
        pass: failures == 0,
        checks,
        failures,
        detail: parts.join("; "),
    }
}

fn regions() -> Outcome {
    // Near α = 2/L the limit moves by about L²/(2μ) per unit of α, so the
    // edge check at 1e-9 below 2/L needs L²/μ well under 2000.
    let edge_moduli = [(2.0, 1.0), (10.0, 1.0), (50.0, 5.0)];
    let scan_moduli = [(2.0, 1.0), (10.0, 1.0), (50.0, 5.0), (100.0, 1.0)];
    let mut parts = Vec::new();
    let mut failures = 0;
    for &(l, mu) in &edge_moduli {
        let edge = hb_smu_beta_limit(l, mu, 2.0 / l - 1e-9);
        let dev = (edge - mu / l).abs();
        failures += usize::from(!(dev <= 1e-6));
        parts.push(format!("L={l} mu={mu}: edge dev {dev:.2e}"));
    }
    for &(l, mu) in &scan_moduli {
        let s = scan(l, mu, 200).expect("valid moduli");
        failures += usize::from(s.containment_violations != 0);
        parts.push(format!(
            "L={l} mu={mu}: {} convex-only cells",
            s.containment_violations
        ));
    }
    Outcome {
        pass: failures == 0,
        checks: edge_moduli.len() + scan_moduli.len(),
        failures,
        detail: parts.join("; "),
    }
}

/// Admissible recurrence constants: `a₁, a₂ ≥ 0`, `a₁ + a₂ < 1`,
/// `0 ≤ c < b`, non-negative initial values (`B₀ = 0` half of the time).
pub fn random_lemma_params(rng: &mut ChaCha8Rng) -> Lemma1Params {
    let total = rng.gen_range(0.0..0.999);
    let a1 = total * rng.gen::<f64>();
    let b = rng.gen_range(0.01..5.0);
    Lemma1Params {
        a1,
        a2: total - a1,
        b,
        c: b * rng.gen_range(0.0..0.999),
        a0: rng.gen_range(0.0..10.0),
        b0: if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(0.0..10.0)
        },
    }
}

fn lemma(opts: &SuiteOptions) -> Outcome {
    let start = Instant::now();
    let mut rng = rng_for(opts, 8);
    let sets: Vec<Lemma1Params> = (0..LEMMA_SETS)
        .map(|_| random_lemma_params(&mut rng))
        .collect();
    let bad: Vec<String> = sets
        .par_iter()
        .flat_map_iter(|p| {
            let cert = lemma1_factor(p).expect("admissible").scaled(opts.tamper);
            LEMMA_SPLITS.iter().filter_map(move |&s| {
                let (a, _) = lemma1_recurrence_oracle(p, LEMMA_K, s);
                a.iter().enumerate().find_map(|(k, &v)| {
                    let bound = cert.bound(k);
                    (!(v <= bound * (1.0 + 1e-12) || v <= f64::MIN_POSITIVE))
                        .then(|| format!("{p:?} split {s} k={k}: {v:e} > {bound:e}"))
                })
            })
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let fast = secs < LEMMA_BUDGET_S;
    let runs = LEMMA_SETS * LEMMA_SPLITS.len();
    Outcome {
        pass: bad.is_empty() && fast,
        checks: runs,
        failures: bad.len() + usize::from(!fast),
        detail: match bad.first() {
            None => format!("{runs} sequences within bound in {secs:.2} s"),
            Some(first) => format!("{}/{runs} sequences exceed bound; first {first}", bad.len()),
        },
    }
}

fn kink_distance(o: &ObjectiveOracle, x: &[f64]) -> f64 {
    match o.kind() {
        ObjectiveKind::Moreau { c } => {
            (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0 / c).abs()
        }
        ObjectiveKind::Counterexample => (x[0] + 1.0).abs().min(x[0].abs()),
        ObjectiveKind::Quadratic { .. } => f64::INFINITY,
    }
}

/// Moreau envelopes of several sizes, the counterexample, and quadratics.
pub fn builtin_oracles(seed: u64) -> Vec<ObjectiveOracle> {
    let mut out: Vec<ObjectiveOracle> = [(1.0, 1), (5.0, 10), (20.0, 50)]
        .iter()
        .map(|&(c, n)| make_moreau(MoreauEnvelopeSpec { c, n }).expect("valid"))
        .collect();
    out.push(make_counterexample());
    out.push(random_quadratic(1.0, 10.0, 20, seed).expect("valid"));
    out.push(
        make_quadratic(QuadraticSpec {
            spectrum: vec![0.5, 2.0, 3.0],
            x_star: vec![1.0, -1.0, 0.5],
        })
        .expect("valid"),
    );
    out
}

fn sample_point(o: &ObjectiveOracle, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = o.dimension();
    match o.kind() {
        // radii on both sides of the branch sphere ‖x‖ = 1/c
        ObjectiveKind::Moreau { c } => {
            let r = rng.gen_range(0.0..4.0 / c);
            random_direction(rng, n)
                .into_iter()
                .map(|v| v * r)
                .collect()
        }
        ObjectiveKind::Counterexample => vec![rng.gen_range(-3.0..3.0)],
        ObjectiveKind::Quadratic { .. } => (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect(),
    }
}

fn gradients(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 9);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let oracles = builtin_oracles(opts.seed);
    for o in &oracles {
        let mut done = 0;
        while done < FD_POINTS {
            let x = sample_point(o, &mut rng);
            if kink_distance(o, &x) < 10.0 * FD_STEP {
                continue;
            }
            let err = finite_diff_check(o, &x, FD_STEP);
            worst = worst.max(err);
            if !(err <= FD_TOL) {
                failures.push(format!("{}: {err:.3e}", o.id()));
            }
            done += 1;
        }
    }
    let checks = oracles.len() * FD_POINTS;
    Outcome {
        pass: failures.is_empty(),
        checks,
        failures: failures.len(),
        detail: match failures.first() {
            None => format!("{checks} points, worst relative error {worst:.3e}"),
            Some(f) => format!("{} of {checks} points fail, first {f}", failures.len()),
        },
    }
}

fn moreau_figure() -> Outcome {
    let fig = match compute_fig1(crate::reproduce::FIG1_ITERATIONS) {
        Ok(f) => f,
        Err(e) => {
            return Outcome {
                pass: false,
                checks: 0,
                failures: 1,
                detail: e.to_string(),
            }
        }
    };
    let cesaro_at_t = |pick: fn(&MethodConfig) -> bool| {
        fig.traces
            .iter()
            .find(|t| pick(&t.method))
            .and_then(|t| t.last())
            .map_or(f64::NAN, |r| r.cesaro_gap)
    };
    let gd = cesaro_at_t(|m| matches!(m, MethodConfig::GradientDescent { .. }));
    let hb = cesaro_at_t(|m| matches!(m, MethodConfig::HeavyBall { .. }));
    let ordered = hb <= gd;
    let env = &fig.envelope;
    let mut detail = format!(
        "envelope C={:.6} fitted on k in [{}, {}], {} points above on [{}, {}]; Cesaro at T: hb {hb:.4e} vs gd {gd:.4e}",
        env.constant,
        env.fit_range.0,
        env.fit_range.1,
        env.violations.len(),
        env.check_range.0,
        env.check_range.1
    );
    if let Some(v) = env.violations.first() {
        detail += &format!("; first above: {} k={} gap={:e} > {:e}", v.0, v.1, v.2, v.3);
    }
    Outcome {
        pass: env.holds() && ordered,
        checks: 2,
        failures: usize::from(!env.holds()) + usize::from(!ordered),
        detail,
    }
}
