use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::{KrausCoefficients, MeasurementModel, OutcomeWeights};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Weights drawn with `p` uniform on the simplex and `q = u p`, `u ∈ [−1, 1]`,
/// then shifted so that `Σ q = 0` while keeping `|q| ≤ p`.
fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let mut q: Vec<f64> = p
        .iter()
        .map(|&p| rng.random_range(-1.0..=1.0) * p)
        .collect();

    let shift: f64 = q.iter().sum();
    for (q, &p) in q.iter_mut().zip(&p) {
        *q = (*q - shift * p).clamp(-p, p);
    }
    // Clamping can leave a residual; shrink the side carrying the excess.
    let residual: f64 = q.iter().sum();
    let positive: f64 = q.iter().filter(|&&x| x > 0.0).sum();
    let negative: f64 = -q.iter().filter(|&&x| x < 0.0).sum::<f64>();
    if residual > 0.0 && positive > 0.0 {
        let f = negative / positive;
        q.iter_mut().filter(|x| **x > 0.0).for_each(|x| *x *= f);
    } else if residual < 0.0 && negative > 0.0 {
        let f = positive / negative;
        q.iter_mut().filter(|x| **x < 0.0).for_each(|x| *x *= f);
    }
    p.into_iter().zip(q).collect()
}

/// Random measurement in canonical form (`α = δ = 0`), deterministic in `seed`.
pub fn random_measurement<T: Real>(seed: u64, n_outcomes: usize) -> Result<MeasurementModel<T>> {
    if n_outcomes < 2 {
        return Err(Error::TooFewOutcomes {
            min: 2,
            got: n_outcomes,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<_> = random_weights(&mut rng, n_outcomes)
        .into_iter()
        .map(|(p, q)| OutcomeWeights::new(T::lit(p), T::lit(q)))
        .collect();
    MeasurementModel::from_weights(&weights)
}

/// Random measurement with generic phases: `α_μ` anywhere compatible with the
/// drawn `(p, q)` and random `δ_μ`. Different `α` change `Σ l²` (and so the
/// input energy) without changing the POVM.
pub fn random_kraus_measurement<T: Real>(
    seed: u64,
    n_outcomes: usize,
) -> Result<MeasurementModel<T>> {
    if n_outcomes < 2 {
        return Err(Error::TooFewOutcomes {
            min: 2,
            got: n_outcomes,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let coeffs = random_weights(&mut rng, n_outcomes)
        .into_iter()
        .map(|(p, q)| {
            // Need |cos α| ≥ |q|/p so that 2ml = q / cos α stays within [−p, p].
            let bound = if p > 0.0 {
                (q.abs() / p).min(1.0).acos()
            } else {
                0.0
            };
            let mut alpha = rng.random_range(-1.0..=1.0) * bound;
            if rng.random_bool(0.5) {
                alpha += std::f64::consts::PI;
            }
            let product = if p > 0.0 {
                (q / alpha.cos()).clamp(-p, p)
            } else {
                0.0
            };
            let plus = (p + product).max(0.0).sqrt();
            let minus = (p - product).max(0.0).sqrt();
            let delta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            KrausCoefficients::new(
                T::lit(0.5 * (plus + minus)),
                T::lit(0.5 * (plus - minus)),
                T::lit(alpha),
                T::lit(delta),
            )
        })
        .collect();
    MeasurementModel::validate(coeffs)
}
