//! First-order methods for smooth convex minimization and the convergence
//! certificates that accompany them.
//!
//! - [`objectives`]: test functions with known class constants.
//! - [`solvers`]: gradient descent, Heavy-ball, Nesterov, and traced runs.
//! - [`certificates`]: stability regions, `O(1/T)` bounds, linear rates.

// Negated comparisons reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod error;
pub mod objectives;
pub mod solvers;

pub use error::{Error, Result};
pub use objectives::ObjectiveOracle;
pub use solvers::{run, MethodConfig, RunSpec, Trace, TraceRecord};
