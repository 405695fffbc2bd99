//! Experiment specs and the `run` pipeline.

use std::fs;
use std::path::{Path, PathBuf};

use heavyball::objectives::{make_counterexample, make_moreau, make_quadratic, random_quadratic};
use heavyball::objectives::{MoreauEnvelopeSpec, QuadraticSpec};
use heavyball::{run, MethodConfig, ObjectiveOracle, RunSpec, Trace};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, spec_err, Result};
use crate::output::write_trace_csv;
use crate::svg::{Plot, Scale, Series};
use crate::verify::{verify_trace, VerificationReport, VerifyOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    Moreau {
        c: f64,
        n: usize,
    },
    Counterexample,
    Quadratic {
        spectrum: Vec<f64>,
        x_star: Vec<f64>,
    },
    RandomQuadratic {
        mu: f64,
        #[serde(rename = "L")]
        lipschitz: f64,
        n: usize,
        seed: u64,
    },
}

impl OracleSpec {
    pub fn build(&self) -> heavyball::Result<ObjectiveOracle> {
        match self {
            OracleSpec::Moreau { c, n } => make_moreau(MoreauEnvelopeSpec { c: *c, n: *n }),
            OracleSpec::Counterexample => Ok(make_counterexample()),
            OracleSpec::Quadratic { spectrum, x_star } => make_quadratic(QuadraticSpec {
                spectrum: spectrum.clone(),
                x_star: x_star.clone(),
            }),
            OracleSpec::RandomQuadratic {
                mu,
                lipschitz,
                n,
                seed,
            } => random_quadratic(*mu, *lipschitz, *n, *seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Directory receiving one `<method-label>.csv` per method.
    pub csv_path: PathBuf,
    #[serde(default)]
    pub svg_path: Option<PathBuf>,
    #[serde(default)]
    pub verify: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub oracle: OracleSpec,
    pub methods: Vec<MethodConfig>,
    pub run: RunSpec,
    pub outputs: Outputs,
}

impl ExperimentSpec {
    /// Parses JSON, reporting the field path of the first error.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            spec_err(
                if path == "." {
                    "spec".to_string()
                } else {
                    path
                },
                e.into_inner().to_string(),
            )
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    /// Checks the spec and builds its oracle.
    pub fn validate(&self) -> Result<ObjectiveOracle> {
        let oracle = self
            .oracle
            .build()
            .map_err(|e| spec_err("oracle", e.to_string()))?;
        if self.methods.is_empty() {
            return Err(spec_err("methods", "at least one method is required"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            m.validate()
                .map_err(|e| spec_err(format!("methods[{i}]"), e.to_string()))?;
        }
        let mut labels: Vec<String> = self.methods.iter().map(MethodConfig::label).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(spec_err("methods", format!("duplicate method {}", w[0])));
        }
        self.run
            .validate()
            .map_err(|e| spec_err("run", e.to_string()))?;
        if self.run.x0.len() != oracle.dimension() {
            return Err(spec_err(
                "run.x0",
                format!(
                    "length {} does not match oracle dimension {}",
                    self.run.x0.len(),
                    oracle.dimension()
                ),
            ));
        }
        Ok(oracle)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub oracle_id: String,
    pub traces: Vec<Trace>,
    pub report: Option<VerificationReport>,
    pub csv_files: Vec<PathBuf>,
    pub svg_file: Option<PathBuf>,
}

impl RunOutcome {
    /// False only when verification ran and found a violation.
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_none_or(|r| r.pass)
    }
}

/// Runs every method of `spec` and writes its artifacts.
pub fn run_experiment(spec: &ExperimentSpec, opts: &VerifyOptions) -> Result<RunOutcome> {
    let oracle = spec.validate()?;
    let traces = spec
        .methods
        .par_iter()
        .map(|m| run(&oracle, m, &spec.run))
        .collect::<heavyball::Result<Vec<_>>>()?;

    let dir = &spec.outputs.csv_path;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut csv_files = Vec::with_capacity(traces.len());
    for t in &traces {
        let path = dir.join(format!("{}.csv", t.method_label));
        write_trace_csv(&path, t)?;
        csv_files.push(path);
    }

    let svg_file = match &spec.outputs.svg_path {
        Some(path) => {
            experiment_plot(&oracle, &traces).write(path)?;
            Some(path.clone())
        }
        None => None,
    };

    let report = spec.outputs.verify.then(|| {
        let methods = traces
            .iter()
            .map(|t| verify_trace(&oracle, t, opts))
            .collect();
        VerificationReport::new(oracle.id(), methods)
    });
    if let Some(r) = &report {
        let path = dir.join("verification.json");
        let text = serde_json::to_string_pretty(r)?;
        fs::write(&path, text + "\n").map_err(io_err(&path))?;
    }

    Ok(RunOutcome {
        oracle_id: oracle.id().to_string(),
        traces,
        report,
        csv_files,
        svg_file,
    })
}

/// Cesàro gaps for the constant-parameter schemes whose certificates
/// target the mean, last-iterate gaps otherwise. Strongly convex oracles
/// get a semi-log plot of `f(x_k) − f★`.
fn experiment_plot(oracle: &ObjectiveOracle, traces: &[Trace]) -> Plot {
    let strongly_convex = oracle.mu().is_some();
    let series = traces
        .iter()
        .map(|t| {
            let cesaro = !strongly_convex
                && matches!(
                    t.method,
                    MethodConfig::HeavyBall { .. } | MethodConfig::Nesterov { .. }
                );
            let (what, pick): (&str, fn(&heavyball::TraceRecord) -> f64) = if cesaro {
                ("f(mean x) - f*", |r| r.cesaro_gap)
            } else {
                ("f(x_k) - f*", |r| r.f_gap)
            };
            Series::new(
                format!("{} [{what}]", t.method_label),
                t.records.iter().map(|r| (r.k as f64, pick(r))).collect(),
            )
        })
        .collect();
    Plot {
        title: oracle.id().to_string(),
        x_label: "k".into(),
        y_label: "optimality gap".into(),
        x_scale: if strongly_convex {
            Scale::Linear
        } else {
            Scale::Log
        },
        y_scale: Scale::Log,
        series,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "oracle": {"kind": "moreau", "c": 5, "n": 2},
        "methods": [{"method": "gradient_descent", "alpha": 1.0}],
        "run": {"x0": [1.0, 1.0], "iterations": 10},
        "outputs": {"csv_path": "out"}
    }"#;

    #[test]
    fn parses_minimal_spec() {
        let spec = ExperimentSpec::from_json(MINIMAL).unwrap();
        assert_eq!(spec.run.record_stride, 1);
        assert!(!spec.outputs.verify);
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn unknown_field_names_its_path() {
        let text = MINIMAL.replace("\"iterations\": 10", "\"iterations\": 10, \"bogus\": 1");
        let err = ExperimentSpec::from_json(&text).unwrap_err();
        assert!(err.to_string().starts_with("run"), "{err}");
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn zero_methods_rejected() {
        let text = MINIMAL.replace(r#"[{"method": "gradient_descent", "alpha": 1.0}]"#, "[]");
        let err = ExperimentSpec::from_json(&text)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().starts_with("methods"), "{err}");
    }

    #[test]
    fn bad_method_parameter_names_its_index() {
        let text = MINIMAL.replace(
            r#"[{"method": "gradient_descent", "alpha": 1.0}]"#,
            r#"[{"method": "gradient_descent", "alpha": 1.0}, {"method": "heavy_ball", "alpha": -1, "beta": 0}]"#,
        );
        let err = ExperimentSpec::from_json(&text)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().starts_with("methods[1]"), "{err}");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let text = MINIMAL.replace("[1.0, 1.0]", "[1.0]");
        let err = ExperimentSpec::from_json(&text)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().starts_with("run.x0"), "{err}");
    }

    #[test]
    fn oracle_kinds_round_trip() {
        for o in [
            OracleSpec::Moreau { c: 1.0, n: 3 },
            OracleSpec::Counterexample,
            OracleSpec::Quadratic {
                spectrum: vec![1.0, 2.0],
                x_star: vec![0.0, 1.0],
            },
            OracleSpec::RandomQuadratic {
                mu: 1.0,
                lipschitz: 10.0,
                n: 4,
                seed: 3,
            },
        ] {
            let text = serde_json::to_string(&o).unwrap();
            assert_eq!(serde_json::from_str::<OracleSpec>(&text).unwrap(), o);
            assert!(o.build().is_ok());
        }
        let q: OracleSpec =
            serde_json::from_str(r#"{"kind":"random_quadratic","mu":1,"L":2,"n":3,"seed":0}"#)
                .unwrap();
        assert!(matches!(q, OracleSpec::RandomQuadratic { lipschitz, .. } if lipschitz == 2.0));
    }
}
