use super::ObjectiveOracle;

/// Largest relative disagreement between the oracle gradient and a central
/// difference with step `h`, per component scaled by `max(1, |gᵢ|)`.
///
/// Near a gradient kink the central difference straddles two branches and
/// the result is meaningless; callers keep `x` at least `h` away from kinks.
pub fn finite_diff_check(oracle: &ObjectiveOracle, x: &[f64], h: f64) -> f64 {
    assert!(h > 0.0, "finite-difference step must be positive");
    let (_, grad) = oracle.eval(x);
    let mut probe = x.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let plus = oracle.value(&probe);
        probe[i] = x[i] - h;
        let minus = oracle.value(&probe);
        probe[i] = x[i];
        let fd = (plus - minus) / (2.0 * h);
        let err = (fd - grad[i]).abs() / grad[i].abs().max(1.0);
        worst = worst.max(err);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{
        make_counterexample, make_moreau, make_quadratic, MoreauEnvelopeSpec, QuadraticSpec,
    };

    #[test]
    fn exact_on_quadratic() {
        let o = make_quadratic(QuadraticSpec {
            spectrum: vec![2.0],
            x_star: vec![0.0],
        })
        .unwrap();
        assert!(finite_diff_check(&o, &[1.0], 1e-5) <= 1e-8);
    }

    #[test]
    fn moreau_linear_branch() {
        let o = make_moreau(MoreauEnvelopeSpec { c: 5.0, n: 2 }).unwrap();
        assert!(finite_diff_check(&o, &[1.0, 0.0], 1e-5) <= 1e-6);
    }

    #[test]
    fn counterexample_right_branch() {
        assert!(finite_diff_check(&make_counterexample(), &[0.5], 1e-5) <= 1e-6);
    }

    #[test]
    fn detects_a_wrong_gradient_across_a_kink() {
        // A step that straddles x = 0 sees both slopes.
        assert!(finite_diff_check(&make_counterexample(), &[0.0], 1e-3) > 1e-3);
    }
}
