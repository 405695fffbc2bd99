use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ObjectiveKind, ObjectiveOracle};
use crate::error::{invalid, Result};

/// Diagonal quadratic `(1/2) Σ λᵢ (xᵢ − x★ᵢ)²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    pub spectrum: Vec<f64>,
    pub x_star: Vec<f64>,
}

pub fn make_quadratic(spec: QuadraticSpec) -> Result<ObjectiveOracle> {
    let QuadraticSpec { spectrum, x_star } = spec;
    if spectrum.is_empty() {
        return Err(invalid("spectrum", "must be non-empty"));
    }
    if let Some(bad) = spectrum.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(invalid(
            "spectrum",
            format!("eigenvalue {bad} is not positive"),
        ));
    }
    if x_star.len() != spectrum.len() {
        return Err(invalid(
            "x_star",
            format!(
                "length {} differs from spectrum length {}",
                x_star.len(),
                spectrum.len()
            ),
        ));
    }
    if x_star.iter().any(|v| !v.is_finite()) {
        return Err(invalid("x_star", "entries must be finite"));
    }
    let lipschitz = spectrum.iter().cloned().fold(f64::MIN, f64::max);
    let mu = spectrum.iter().cloned().fold(f64::MAX, f64::min);
    let n = spectrum.len();
    let id = format!("quadratic(n={n},mu={mu},L={lipschitz})");
    Ok(ObjectiveOracle::new(
        ObjectiveKind::Quadratic { spectrum },
        n,
        lipschitz,
        Some(mu),
        Some(x_star),
        Some(0.0),
        id,
    ))
}

/// Random diagonal quadratic in `S(mu, L)`.
///
/// The spectrum always contains `mu` and `L`; the other `n − 2` eigenvalues
/// and the minimizer coordinates (in `[−5, 5]`) come from a ChaCha8 stream
/// seeded with `seed`, so equal arguments give equal oracles on every
/// platform.
pub fn random_quadratic(mu: f64, lipschitz: f64, n: usize, seed: u64) -> Result<ObjectiveOracle> {
    if !(mu > 0.0) {
        return Err(invalid("mu", format!("must be positive, got {mu}")));
    }
    if !(mu <= lipschitz) || !lipschitz.is_finite() {
        return Err(invalid(
            "L",
            format!("must satisfy mu <= L, got mu={mu}, L={lipschitz}"),
        ));
    }
    if n < 2 {
        return Err(invalid("n", format!("must be at least 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = Vec::with_capacity(n);
    spectrum.push(mu);
    spectrum.push(lipschitz);
    for _ in 2..n {
        let lambda = if mu == lipschitz {
            mu
        } else {
            rng.gen_range(mu..=lipschitz)
        };
        spectrum.push(lambda);
    }
    let x_star = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    let oracle = make_quadratic(QuadraticSpec { spectrum, x_star })?;
    let id = format!("random_quadratic(n={n},mu={mu},L={lipschitz},seed={seed})");
    Ok(ObjectiveOracle { id, ..oracle }.with_seed(seed))
}

pub(super) fn value(spectrum: &[f64], x_star: &[f64], x: &[f64]) -> f64 {
    0.5 * spectrum
        .iter()
        .zip(x_star)
        .zip(x)
        .map(|((l, xs), xi)| {
            let d = xi - xs;
            l * d * d
        })
        .sum::<f64>()
}

pub(super) fn gradient(spectrum: &[f64], x_star: &[f64], x: &[f64], grad: &mut [f64]) {
    for (((g, l), xs), xi) in grad.iter_mut().zip(spectrum).zip(x_star).zip(x) {
        *g = l * (xi - xs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(spectrum: &[f64], x_star: &[f64]) -> ObjectiveOracle {
        make_quadratic(QuadraticSpec {
            spectrum: spectrum.to_vec(),
            x_star: x_star.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn hand_values() {
        assert_eq!(quad(&[1.0], &[0.0]).eval(&[3.0]), (4.5, vec![3.0]));
        assert_eq!(
            quad(&[1.0, 10.0], &[0.0, 0.0]).eval(&[1.0, 1.0]),
            (5.5, vec![1.0, 10.0])
        );
        assert_eq!(
            quad(&[2.0, 2.0], &[1.0, 0.0]).eval(&[1.0, 0.0]),
            (0.0, vec![0.0, 0.0])
        );
    }

    #[test]
    fn constants_from_spectrum() {
        let o = quad(&[3.0, 1.5, 7.0], &[0.0, 1.0, 2.0]);
        assert_eq!(o.lipschitz(), 7.0);
        assert_eq!(o.mu(), Some(1.5));
        assert_eq!(o.f_star(), Some(0.0));
    }

    #[test]
    fn rejects_bad_spectrum() {
        let bad = |s: Vec<f64>, x: Vec<f64>| {
            make_quadratic(QuadraticSpec {
                spectrum: s,
                x_star: x,
            })
        };
        assert!(bad(vec![], vec![]).is_err());
        assert!(bad(vec![1.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(bad(vec![1.0, -2.0], vec![0.0, 0.0]).is_err());
        assert!(bad(vec![1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn degenerate_random_range() {
        let o = random_quadratic(1.0, 1.0, 2, 7).unwrap();
        assert_eq!(
            o.kind(),
            &ObjectiveKind::Quadratic {
                spectrum: vec![1.0, 1.0]
            }
        );
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_quadratic(1.0, 10.0, 6, 42).unwrap();
        let b = random_quadratic(1.0, 10.0, 6, 42).unwrap();
        assert_eq!(a, b);
        let c = random_quadratic(1.0, 10.0, 6, 43).unwrap();
        assert_ne!(a, c);
        assert!(a.id().contains("seed=42"));
        assert_eq!(a.seed(), Some(42));
    }

    #[test]
    fn random_spectrum_extremes() {
        let o = random_quadratic(1.0, 10.0, 5, 3).unwrap();
        assert_eq!(o.mu(), Some(1.0));
        assert_eq!(o.lipschitz(), 10.0);
        let ObjectiveKind::Quadratic { spectrum } = o.kind() else {
            panic!("not a quadratic")
        };
        assert!(spectrum.iter().all(|l| (1.0..=10.0).contains(l)));
        assert!(o.x_star().unwrap().iter().all(|v| (-5.0..=5.0).contains(v)));
    }

    #[test]
    fn random_rejects_inverted_range() {
        assert!(random_quadratic(2.0, 1.0, 3, 0).is_err());
        assert!(random_quadratic(0.0, 1.0, 3, 0).is_err());
        assert!(random_quadratic(1.0, 2.0, 1, 0).is_err());
    }
}
