use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hbharness::error::HarnessError;
use hbharness::region::{write_region, DEFAULT_RESOLUTION};
use hbharness::reproduce::{figure_name, reproduce, Figure};
use hbharness::suite::{run_suite, SuiteOptions, DEFAULT_INSTANCES, DEFAULT_SEED};
use hbharness::{run_experiment, ExperimentSpec, VerifyOptions};

/// Heavy-ball experiments and convergence certificate checks.
#[derive(Parser)]
#[command(name = "hbcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the methods of a JSON experiment spec and write one CSV per method.
    Run {
        spec: PathBuf,
        /// Multiply every certificate coefficient (negative-control hook).
        #[arg(long, default_value_t = 1.0, hide = true)]
        tamper: f64,
    },
    /// Scan the stability regions on a grid and write CSV and SVG.
    Region {
        #[arg(long = "L")]
        lipschitz: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate one of the reference figures.
    Reproduce {
        figure: Figure,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full property suite and write a JSON report.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_INSTANCES as u64, value_parser = clap::value_parser!(u64).range(1..))]
        instances: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0, hide = true)]
        tamper: f64,
    },
}

const VERIFICATION_FAILED: u8 = 1;
const USAGE_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(VERIFICATION_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

/// `Ok(false)` means a verification failure.
fn execute(cmd: Command) -> Result<bool, HarnessError> {
    match cmd {
        Command::Run { spec, tamper } => {
            let spec = ExperimentSpec::load(&spec)?;
            let opts = VerifyOptions {
                tamper,
                ..VerifyOptions::default()
            };
            let outcome = run_experiment(&spec, &opts)?;
            for (t, path) in outcome.traces.iter().zip(&outcome.csv_files) {
                let status = match t.diverged_at {
                    Some(k) => format!("diverged at k={k}"),
                    None => format!("f_gap at T {:e}", t.last().map_or(f64::NAN, |r| r.f_gap)),
                };
                println!("{}: {status} -> {}", t.method_label, path.display());
            }
            if let Some(svg) = &outcome.svg_file {
                println!("plot -> {}", svg.display());
            }
            if let Some(report) = &outcome.report {
                for m in &report.methods {
                    let checks: Vec<String> = m
                        .checks
                        .iter()
                        .map(|c| {
                            format!(
                                "{} {}",
                                c.bound_name,
                                if c.pass { "ok" } else { "VIOLATED" }
                            )
                        })
                        .collect();
                    let note = m
                        .note
                        .as_deref()
                        .map(|n| format!(" [{n}]"))
                        .unwrap_or_default();
                    println!("verify {}: {}{note}", m.method_label, checks.join(", "));
                }
                println!(
                    "verification {}",
                    if report.pass { "passed" } else { "FAILED" }
                );
            }
            Ok(outcome.passed())
        }
        Command::Region {
            lipschitz,
            mu,
            res,
            out,
        } => {
            let (scan, files) = write_region(lipschitz, mu, res, &out)?;
            println!(
                "L={} mu={}: {} convex-region cells, {} strongly-convex-region cells, {} containment violations",
                scan.lipschitz, scan.mu, scan.hb_fl_count, scan.hb_smu_count, scan.containment_violations
            );
            for f in files {
                println!("-> {}", f.display());
            }
            Ok(true)
        }
        Command::Reproduce { figure, out } => {
            let done = reproduce(figure, &out)?;
            println!("{} written:", figure_name(figure));
            for f in done.files {
                println!("-> {}", f.display());
            }
            Ok(true)
        }
        Command::Verify {
            seed,
            instances,
            out,
            tamper,
        } => {
            let opts = SuiteOptions {
                seed,
                instances: instances as usize,
                tamper,
            };
            let report = run_suite(&opts);
            for c in &report.criteria {
                println!("{}", c.line());
            }
            if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
                    path: dir.to_path_buf(),
                    source,
                })?;
            }
            let text = serde_json::to_string_pretty(&report)?;
            fs::write(&out, text + "\n").map_err(|source| HarnessError::Io {
                path: out.clone(),
                source,
            })?;
            println!("report -> {}", out.display());
            Ok(report.pass)
        }
    }
}
