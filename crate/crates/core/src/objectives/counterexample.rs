use super::{ObjectiveKind, ObjectiveOracle};

/// Piecewise quadratic in one variable whose gradient is
///
/// ```text
/// 50x + 45   x < −1
/// 5x         −1 ≤ x < 0
/// 50x        0 ≤ x
/// ```
///
/// The value is the antiderivative pinned by `f(0) = 0`, so `f★ = 0` at
/// `x★ = 0`. Curvature lies in `[5, 50]`, hence `mu = 5`, `L = 50`.
pub fn make_counterexample() -> ObjectiveOracle {
    ObjectiveOracle::new(
        ObjectiveKind::Counterexample,
        1,
        50.0,
        Some(5.0),
        Some(vec![0.0]),
        Some(0.0),
        "counterexample".to_string(),
    )
}

pub(super) fn value(x: f64) -> f64 {
    if x < -1.0 {
        25.0 * x * x + 45.0 * x + 22.5
    } else if x < 0.0 {
        2.5 * x * x
    } else {
        25.0 * x * x
    }
}

pub(super) fn gradient(x: f64) -> f64 {
    if x < -1.0 {
        50.0 * x + 45.0
    } else if x < 0.0 {
        5.0 * x
    } else {
        50.0 * x
    }
}
