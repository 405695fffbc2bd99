//! The three reference experiments: O(1/k) behaviour on the Moreau
//! envelope, the stability regions, and the non-smooth counterexample.

use std::fs;
use std::path::{Path, PathBuf};

use heavyball::certificates::polyak_optimal_params;
use heavyball::objectives::{make_counterexample, make_moreau, MoreauEnvelopeSpec};
use heavyball::{run, MethodConfig, ObjectiveOracle, RunSpec, Trace};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Result};
use crate::output::write_trace_csv;
use crate::region::{write_region, RegionScan, DEFAULT_RESOLUTION};
use crate::svg::{Plot, Scale, Series};
use crate::verify::{verify_trace, VerificationReport, VerifyOptions};

pub const FIG1_ITERATIONS: usize = 10_000;
pub const FIG1_C: f64 = 5.0;
pub const FIG1_DIM: usize = 50;
pub const FIG1_X0_NORM: f64 = 2.0;
/// The envelope constant is fitted on `k ∈ [FIT_FROM, FIT_TO]` and checked
/// on `k ∈ [FIT_FROM, T]`.
pub const FIG1_FIT_FROM: usize = 10;
pub const FIG1_FIT_TO: usize = 100;

pub const FIG3_ITERATIONS: usize = 10_000;
pub const FIG3_ALPHA_FACTOR: f64 = 1.9;
pub const FIG3_BETA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            other => Err(format!(
                "unknown figure {other:?}, expected fig1, fig2 or fig3"
            )),
        }
    }
}

/// A named curve extracted from a trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub constant: f64,
    pub fit_range: (usize, usize),
    pub check_range: (usize, usize),
    /// `(curve, k, gap, C/k)` for every point above the envelope.
    pub violations: Vec<(String, usize, f64, f64)>,
}

impl Envelope {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `C = max k·gap(k)` over the fit range, then every point of the check
/// range is compared with `C/k` (relative slack `rel`).
pub fn fit_envelope(
    curves: &[Curve],
    fit: (usize, usize),
    check: (usize, usize),
    rel: f64,
) -> Envelope {
    let in_range = |(lo, hi): (usize, usize)| move |&&(k, _): &&(usize, f64)| k >= lo && k <= hi;
    let constant = curves
        .iter()
        .flat_map(|c| {
            c.points
                .iter()
                .filter(in_range(fit))
                .map(|&(k, g)| k as f64 * g)
        })
        .fold(0.0, f64::max);
    let mut violations = Vec::new();
    for c in curves {
        for &(k, g) in c.points.iter().filter(in_range(check)) {
            let b = constant / k as f64;
            if !(g <= b * (1.0 + rel)) {
                violations.push((c.name.clone(), k, g, b));
            }
        }
    }
    Envelope {
        constant,
        fit_range: fit,
        check_range: check,
        violations,
    }
}

pub struct Fig1 {
    pub oracle: ObjectiveOracle,
    pub traces: Vec<Trace>,
    pub curves: Vec<Curve>,
    pub envelope: Envelope,
}

pub fn fig1_methods() -> [MethodConfig; 3] {
    [
        MethodConfig::GradientDescent { alpha: 1.0 },
        MethodConfig::HeavyBall {
            alpha: 1.0,
            beta: 0.5,
        },
        MethodConfig::HeavyBallTv { alpha0: 1.0 },
    ]
}

pub fn fig1_x0() -> Vec<f64> {
    vec![FIG1_X0_NORM / (FIG1_DIM as f64).sqrt(); FIG1_DIM]
}

/// Cesàro gaps for the constant-parameter methods, last-iterate gap for
/// the time-varying one.
pub fn fig1_curve(trace: &Trace) -> Curve {
    let cesaro = !matches!(trace.method, MethodConfig::HeavyBallTv { .. });
    let (suffix, pick): (&str, fn(&heavyball::TraceRecord) -> f64) = if cesaro {
        ("f(mean x_k)", |r| r.cesaro_gap)
    } else {
        ("f(x_k)", |r| r.f_gap)
    };
    Curve {
        name: format!("{} {suffix}", trace.method_label),
        points: trace.records.iter().map(|r| (r.k, pick(r))).collect(),
    }
}

pub fn compute_fig1(iterations: usize) -> Result<Fig1> {
    let oracle = make_moreau(MoreauEnvelopeSpec {
        c: FIG1_C,
        n: FIG1_DIM,
    })?;
    let spec = RunSpec::new(fig1_x0(), iterations);
    let traces = fig1_methods()
        .par_iter()
        .map(|m| run(&oracle, m, &spec))
        .collect::<heavyball::Result<Vec<_>>>()?;
    let curves: Vec<Curve> = traces.iter().map(fig1_curve).collect();
    let envelope = fit_envelope(
        &curves,
        (FIG1_FIT_FROM, FIG1_FIT_TO.min(iterations)),
        (FIG1_FIT_FROM, iterations),
        1e-9,
    );
    Ok(Fig1 {
        oracle,
        traces,
        curves,
        envelope,
    })
}

pub struct Fig3Run {
    pub tag: String,
    pub x0: f64,
    pub polyak: bool,
    pub trace: Trace,
}

impl Fig3Run {
    pub fn min_gap(&self) -> f64 {
        self.trace
            .records
            .iter()
            .map(|r| r.f_gap)
            .fold(f64::INFINITY, f64::min)
    }

    /// First `k` with `f(x_k) − f★ < threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<usize> {
        self.trace
            .records
            .iter()
            .find(|r| r.f_gap < threshold)
            .map(|r| r.k)
    }
}

/// Polyak-optimal and region-admissible runs on the counterexample from
/// `x₀ ∈ {1, −1}`.
pub fn compute_fig3(iterations: usize) -> Result<(ObjectiveOracle, Vec<Fig3Run>)> {
    let oracle = make_counterexample();
    let l = oracle.lipschitz();
    let mu = oracle.mu().expect("counterexample is strongly convex");
    let (a_star, b_star) = polyak_optimal_params(l, mu)?;
    let polyak = MethodConfig::HeavyBall {
        alpha: a_star,
        beta: b_star,
    };
    let admissible = MethodConfig::HeavyBall {
        alpha: FIG3_ALPHA_FACTOR / l,
        beta: FIG3_BETA,
    };
    let cells: Vec<(bool, f64)> = [true, false]
        .into_iter()
        .flat_map(|p| [1.0, -1.0].map(|x0| (p, x0)))
        .collect();
    let runs = cells
        .par_iter()
        .map(|&(is_polyak, x0)| {
            let m = if is_polyak { polyak } else { admissible };
            let trace = run(&oracle, &m, &RunSpec::new(vec![x0], iterations))?;
            let kind = if is_polyak { "polyak" } else { "admissible" };
            let sign = if x0 < 0.0 { "m" } else { "" };
            Ok(Fig3Run {
                tag: format!("{kind}_x0_{sign}{}", x0.abs()),
                x0,
                polyak: is_polyak,
                trace,
            })
        })
        .collect::<heavyball::Result<Vec<_>>>()?;
    Ok((oracle, runs))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fig3Summary {
    pub tag: String,
    pub method_label: String,
    pub x0: f64,
    pub min_gap: f64,
    pub first_below_1e_6: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "figure", rename_all = "lowercase")]
pub enum ReproduceSummary {
    Fig1 {
        envelope: Envelope,
        cesaro_gap_at_t: Vec<(String, f64)>,
        report: VerificationReport,
    },
    Fig2 {
        panels: Vec<RegionScan>,
    },
    Fig3 {
        runs: Vec<Fig3Summary>,
        report: VerificationReport,
    },
}

pub struct Reproduced {
    pub summary: ReproduceSummary,
    pub files: Vec<PathBuf>,
}

pub fn reproduce(figure: Figure, dir: &Path) -> Result<Reproduced> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::new();
    let summary = match figure {
        Figure::Fig1 => {
            let fig = compute_fig1(FIG1_ITERATIONS)?;
            for t in &fig.traces {
                let path = dir.join(format!("fig1_{}.csv", t.method_label));
                write_trace_csv(&path, t)?;
                files.push(path);
            }
            let c = fig.envelope.constant;
            let mut series: Vec<Series> = fig
                .curves
                .iter()
                .map(|cv| {
                    Series::new(
                        cv.name.clone(),
                        cv.points.iter().map(|&(k, g)| (k as f64, g)).collect(),
                    )
                })
                .collect();
            let t = FIG1_ITERATIONS as f64;
            series.push(
                Series::new(format!("{c:.3}/k reference"), vec![(1.0, c), (t, c / t)]).dashed(),
            );
            let plot = Plot {
                title: format!("Moreau envelope c={FIG1_C}, n={FIG1_DIM}"),
                x_label: "k".into(),
                y_label: "f - f*".into(),
                x_scale: Scale::Log,
                y_scale: Scale::Log,
                series,
            };
            let svg = dir.join("fig1.svg");
            plot.write(&svg)?;
            files.push(svg);
            let opts = VerifyOptions::default();
            let report = VerificationReport::new(
                fig.oracle.id(),
                fig.traces
                    .iter()
                    .map(|t| verify_trace(&fig.oracle, t, &opts))
                    .collect(),
            );
            ReproduceSummary::Fig1 {
                envelope: fig.envelope,
                cesaro_gap_at_t: fig
                    .traces
                    .iter()
                    .map(|t| {
                        (
                            t.method_label.clone(),
                            t.last().map_or(f64::NAN, |r| r.cesaro_gap),
                        )
                    })
                    .collect(),
                report,
            }
        }
        Figure::Fig2 => {
            let mut panels = Vec::new();
            for (l, mu) in [(2.0, 1.0), (10.0, 1.0)] {
                let (scan, written) = write_region(l, mu, DEFAULT_RESOLUTION, dir)?;
                panels.push(scan);
                files.extend(written);
            }
            ReproduceSummary::Fig2 { panels }
        }
        Figure::Fig3 => {
            let (oracle, runs) = compute_fig3(FIG3_ITERATIONS)?;
            for r in &runs {
                let path = dir.join(format!("fig3_{}_{}.csv", r.tag, r.trace.method_label));
                write_trace_csv(&path, &r.trace)?;
                files.push(path);
            }
            let plot = Plot {
                title: "Counterexample, mu=5, L=50".into(),
                x_label: "k".into(),
                y_label: "f(x_k) - f*".into(),
                x_scale: Scale::Linear,
                y_scale: Scale::Log,
                series: runs
                    .iter()
                    .map(|r| {
                        let pts = r
                            .trace
                            .records
                            .iter()
                            .map(|x| (x.k as f64, x.f_gap))
                            .collect();
                        let s = Series::new(format!("{} x0={}", r.trace.method_label, r.x0), pts);
                        if r.polyak {
                            s
                        } else {
                            s.dashed()
                        }
                    })
                    .collect(),
            };
            let svg = dir.join("fig3.svg");
            plot.write(&svg)?;
            files.push(svg);
            let opts = VerifyOptions::default();
            let report = VerificationReport::new(
                oracle.id(),
                runs.iter()
                    .map(|r| verify_trace(&oracle, &r.trace, &opts))
                    .collect(),
            );
            ReproduceSummary::Fig3 {
                runs: runs
                    .iter()
                    .map(|r| Fig3Summary {
                        tag: r.tag.clone(),
                        method_label: r.trace.method_label.clone(),
                        x0: r.x0,
                        min_gap: r.min_gap(),
                        first_below_1e_6: r.first_below(1e-6),
                    })
                    .collect(),
                report,
            }
        }
    };
    let path = dir.join(format!("{}_summary.json", figure_name(figure)));
    let text = serde_json::to_string_pretty(&summary)?;
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    files.push(path);
    Ok(Reproduced { summary, files })
}

pub fn figure_name(f: Figure) -> &'static str {
    match f {
        Figure::Fig1 => "fig1",
        Figure::Fig2 => "fig2",
        Figure::Fig3 => "fig3",
    }
}
