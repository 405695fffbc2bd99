//! Experiment runner for the `heavyball` library: JSON experiment specs,
//! CSV and SVG artifacts, certificate verification, region scans, figure
//! reproduction and the aggregate property suite.

// Negated comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod output;
pub mod region;
pub mod reproduce;
pub mod spec;
pub mod suite;
pub mod svg;
pub mod verify;

pub use error::{HarnessError, Result};
pub use spec::{run_experiment, ExperimentSpec, OracleSpec, Outputs, RunOutcome};
pub use verify::{verify_trace, BoundCheck, MethodReport, VerificationReport, VerifyOptions};
