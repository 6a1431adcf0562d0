//! Derivative-free maximization of the teleported energy.
//!
//! The policy search evaluates `E_B` by brute force on the four-dimensional
//! Hilbert space and never touches the closed forms, so it serves as an
//! independent check of them. `E_B` separates over outcomes, so every
//! outcome is searched on its own: a coarse grid over `ω` times a spiral
//! lattice on the unit sphere for `n⃗`, followed by Nelder–Mead refinement in
//! `(ω, θ, φ)` from the best grid points.

mod simplex;

pub use simplex::{maximize, SimplexOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::max_eb_closed;
use crate::error::{Error, Result};
use crate::measurement::{MeasurementModel, OutcomeWeights};
use crate::model::{build_hamiltonian, ground_state, ModelParams};
use crate::protocol::{FeedbackPolicy, LocalUnitary};
use crate::qmath::{on_b, pauli_dot, Operator4, StateVector4};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub coarse_omega_points: usize,
    /// Points of the spiral lattice on the unit sphere.
    pub sphere_points: usize,
    /// Nelder–Mead iteration budget per start (per dimension for the weight search).
    pub refine_iters: usize,
    pub tol: f64,
    /// Number of grid points (or random points for weights) refined.
    pub starts: usize,
    /// Seeds the start points of the weight search.
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            coarse_omega_points: 64,
            sphere_points: 256,
            refine_iters: 200,
            tol: 1e-10,
            starts: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult<T> {
    pub best_policy: FeedbackPolicy<T>,
    pub best_value: T,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: Real> OptimizationResult<T> {
    /// Turns an unconverged result into `Error::NoConvergence`.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                evaluations: self.evaluations,
                best_value: self.best_value.as_f64(),
            })
        }
    }
}

/// Deterministic spiral (golden-angle) lattice of `count` unit vectors.
pub fn sphere_lattice<T: Real>(count: usize) -> Vec<[T; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [T::lit(r * phi.cos()), T::lit(r * phi.sin()), T::lit(z)]
        })
        .collect()
}

fn axis_from_angles<T: Real>(theta: T, phi: T) -> [T; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

fn angles_from_axis<T: Real>(n: [T; 3]) -> (T, T) {
    (n[2].max(-T::one()).min(T::one()).acos(), n[1].atan2(n[0]))
}

/// Energy extracted by `U = cos ω + i n⃗·σ⃗ sin ω` from one unnormalized
/// branch `φ = M(μ)|g⟩`, i.e. `⟨φ|K|φ⟩ − ⟨φ|U†KU|φ⟩` with `K = H_B + V`.
///
/// Expanding `U†KU = cos²ω K + sin²ω NKN + i sinω cosω (KN − NK)` with
/// `N = n⃗·σ⃗_B` keeps small extracted energies free of cancellation between
/// O(1) expectation values.
struct BranchObjective<T> {
    branch: StateVector4<T>,
    local_b: Operator4<T>,
    k_branch: StateVector4<T>,
    k_expect: T,
}

impl<T: Real> BranchObjective<T> {
    fn new(branch: StateVector4<T>, local_b: Operator4<T>) -> Self {
        let k_branch = local_b.apply(&branch);
        let k_expect = branch.inner(&k_branch).re;
        Self {
            branch,
            local_b,
            k_branch,
            k_expect,
        }
    }

    fn value(&self, omega: T, axis: [T; 3]) -> T {
        let flipped = on_b(&pauli_dot(axis)).apply(&self.branch);
        let sandwich = flipped.inner(&self.local_b.apply(&flipped)).re;
        let cross = flipped.inner(&self.k_branch).im;
        let (s, c) = omega.sin_cos();
        -(s * s * (sandwich - self.k_expect) + T::lit(2.0) * s * c * cross)
    }

    fn search(&self, opts: &OptimizerOptions) -> (LocalUnitary<T>, T, usize, bool) {
        let lattice = sphere_lattice::<T>(opts.sphere_points.max(1));
        let omega_points = opts.coarse_omega_points.max(1);
        let d_omega = T::PI() / T::lit(omega_points as f64);
        let mut grid: Vec<(T, T, [T; 3])> = Vec::with_capacity(omega_points * lattice.len());
        for i in 0..omega_points {
            let omega = d_omega * T::lit(i as f64);
            for n in &lattice {
                grid.push((self.value(omega, *n), omega, *n));
            }
        }
        let mut evaluations = grid.len();
        grid.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

        let mut best: Option<(LocalUnitary<T>, T, bool)> = None;
        for &(_, omega, n) in grid.iter().take(opts.starts.max(1)) {
            let (theta, phi) = angles_from_axis(n);
            let out = refine(
                |x: &[T]| self.value(x[0], axis_from_angles(x[1], x[2])),
                vec![omega, theta, phi],
                d_omega,
                opts,
            );
            evaluations += out.evaluations;
            let unitary = LocalUnitary {
                omega: out.x[0],
                axis: axis_from_angles(out.x[1], out.x[2]),
            };
            if best.as_ref().is_none_or(|(_, v, _)| out.value > *v) {
                best = Some((unitary, out.value, out.converged));
            }
        }
        let (unitary, value, converged) = best.expect("at least one start");
        (unitary, value, evaluations, converged)
    }
}

/// Nelder–Mead with restarts: a fresh simplex is built around the best vertex
/// until a run converges or `RESTARTS` runs have been spent.
fn refine<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    x0: Vec<T>,
    step: T,
    opts: &OptimizerOptions,
) -> SimplexOutcome<T> {
    const RESTARTS: usize = 8;
    let tol = T::lit(opts.tol);
    let mut step = step;
    let mut best = maximize(&mut f, &x0, step, opts.refine_iters, tol);
    let mut evaluations = best.evaluations;
    for _ in 0..RESTARTS {
        if best.converged {
            break;
        }
        step = (step * T::lit(0.1)).max(tol * T::lit(1e3));
        let next = maximize(&mut f, &best.x, step, opts.refine_iters, tol);
        evaluations += next.evaluations;
        if next.value >= best.value {
            best = next;
        }
    }
    best.evaluations = evaluations;
    best
}

/// Best feedback policy for a fixed measurement, found numerically.
pub fn maximize_over_policy<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    opts: &OptimizerOptions,
) -> OptimizationResult<T> {
    let local_b = build_hamiltonian(params).local_b();
    let branches = model.branches(&ground_state(params).psi);
    let per_outcome: Vec<_> = branches
        .into_par_iter()
        .map(|branch| {
            if branch.norm_sqr() < T::zero_weight() {
                return (LocalUnitary::identity(), T::zero(), 0, true);
            }
            BranchObjective::new(branch, local_b).search(opts)
        })
        .collect();

    OptimizationResult {
        best_value: per_outcome.iter().map(|r| r.1).sum(),
        evaluations: per_outcome.iter().map(|r| r.2).sum(),
        converged: per_outcome.iter().all(|r| r.3),
        best_policy: FeedbackPolicy::new(per_outcome.into_iter().map(|r| r.0).collect()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightOptimization<T> {
    pub weights: Vec<OutcomeWeights<T>>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Maps unconstrained coordinates to feasible weights: softmax logits for
/// `p` (last logit fixed at zero), `u = sin v` with `q = u p`, then the side
/// of `q` carrying the excess is shrunk so that `Σ q = 0` and `|q| ≤ p` hold.
pub fn weights_from_coordinates<T: Real>(x: &[T], n: usize) -> Vec<OutcomeWeights<T>> {
    let logits: Vec<T> = x[..n - 1]
        .iter()
        .copied()
        .chain(std::iter::once(T::zero()))
        .collect();
    let top = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = logits.iter().map(|l| (*l - top).exp()).collect();
    let total: T = exps.iter().copied().sum();
    let p: Vec<T> = exps.iter().map(|e| *e / total).collect();
    let mut q: Vec<T> = p
        .iter()
        .zip(&x[n - 1..])
        .map(|(p, v)| *p * v.sin())
        .collect();

    let positive: T = q.iter().copied().filter(|v| *v > T::zero()).sum();
    let negative: T = -q.iter().copied().filter(|v| *v < T::zero()).sum::<T>();
    if positive > negative {
        let f = negative / positive;
        q.iter_mut()
            .filter(|v| **v > T::zero())
            .for_each(|v| *v *= f);
    } else if negative > positive {
        let f = positive / negative;
        q.iter_mut()
            .filter(|v| **v < T::zero())
            .for_each(|v| *v *= f);
    }
    p.into_iter()
        .zip(q)
        .map(|(p, q)| OutcomeWeights::new(p, q))
        .collect()
}

/// Maximizes `max_{U_B} E_B` over POVM weights with `n_outcomes` outcomes.
pub fn maximize_over_weights<T: Real>(
    params: &ModelParams<T>,
    n_outcomes: usize,
    opts: &OptimizerOptions,
) -> Result<WeightOptimization<T>> {
    if n_outcomes < 2 {
        return Err(Error::TooFewOutcomes {
            min: 2,
            got: n_outcomes,
        });
    }
    let dim = 2 * n_outcomes - 1;
    let objective = |x: &[T]| max_eb_closed(params, &weights_from_coordinates(x, n_outcomes));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<T>> = (0..opts.starts.max(1) * 3)
        .map(|_| {
            (0..dim)
                .map(|j| {
                    T::lit(if j < n_outcomes - 1 {
                        rng.random_range(-1.0..1.0)
                    } else {
                        rng.random_range(-3.0..3.0)
                    })
                })
                .collect()
        })
        .collect();

    let tol = T::lit(opts.tol);
    let budget = opts.refine_iters * dim;
    let runs: Vec<SimplexOutcome<T>> = starts
        .into_par_iter()
        .map(|x0| {
            let mut out = maximize(objective, &x0, T::lit(0.5), budget, tol);
            // A restart from the best vertex shakes off a collapsed simplex.
            let again = refine(
                objective,
                out.x.clone(),
                T::lit(0.05),
                &OptimizerOptions {
                    refine_iters: budget,
                    ..*opts
                },
            );
            let evaluations = out.evaluations + again.evaluations;
            if again.value >= out.value {
                out = again;
            }
            out.evaluations = evaluations;
            out
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let best = runs
        .into_iter()
        .max_by(|a, b| {
            a.value
                .partial_cmp(&b.value)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("at least one start");
    Ok(WeightOptimization {
        weights: weights_from_coordinates(&best.x, n_outcomes),
        value: best.value,
        evaluations,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::max_eb_projective;
    use crate::measurement::random_kraus_measurement;
    use crate::protocol::teleported_energy;

    const MAX_EB_UNIT: f64 = 0.114_747_633_940_147_12;

    #[test]
    fn lattice_points_are_unit() {
        let pts = sphere_lattice::<f64>(256);
        assert_eq!(pts.len(), 256);
        for p in pts {
            assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn uncorrelated_measurement_gives_nothing() {
        let p = ModelParams::<f64>::new(1.0, 1.0).unwrap();
        let m = MeasurementModel::from_weights(&[
            OutcomeWeights::<f64>::new(0.3, 0.0),
            OutcomeWeights::<f64>::new(0.7, 0.0),
        ])
        .unwrap();
        let r = maximize_over_policy(&p, &m, &OptimizerOptions::default());
        assert!(r.best_value.abs() <= 1e-10);
    }

    #[test]
    fn projective_pair() {
        let p = ModelParams::<f64>::new(1.0, 1.0).unwrap();
        let m = MeasurementModel::projective_x();
        let r = maximize_over_policy(&p, &m, &OptimizerOptions::default());
        assert!(
            (r.best_value - MAX_EB_UNIT).abs() <= 1e-8,
            "{}",
            r.best_value
        );
        assert!(r.converged);
        let replay = teleported_energy(&p, &m, &r.best_policy).unwrap();
        assert!((replay - r.best_value).abs() <= 1e-12);
    }

    #[test]
    fn random_models_match_closed_form_with_y_axis() {
        for seed in 0..12 {
            let p =
                ModelParams::<f64>::new(0.5 + 0.1 * seed as f64, 1.5 - 0.08 * seed as f64).unwrap();
            let m = random_kraus_measurement::<f64>(seed, 2 + (seed % 3) as usize).unwrap();
            let r = maximize_over_policy(&p, &m, &OptimizerOptions::default());
            let closed = max_eb_closed(&p, &m.weights());
            assert!(r.converged);
            assert!(
                (r.best_value - closed).abs() <= 1e-9 * closed.max(1e-3),
                "{} {}",
                r.best_value,
                closed
            );
            for (u, w) in r.best_policy.unitaries().iter().zip(m.weights()) {
                // For |q| = p the branch is a product state and the optimal axis is degenerate.
                if w.q.abs() > 1e-6 && w.q.abs() < 0.99 * w.p {
                    assert!(u.axis[1].abs() >= 1.0 - 1e-4, "{:?} {:?}", u.axis, w);
                }
            }
        }
    }

    #[test]
    fn weight_coordinates_are_feasible() {
        let x = [0.3, -1.2, 0.9, 2.0, -0.4, 1.5, 3.0];
        let w = weights_from_coordinates(&x, 4);
        assert!((w.iter().map(|w| w.p).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w.iter().map(|w| w.q).sum::<f64>().abs() < 1e-15);
        assert!(w.iter().all(|w| w.q.abs() <= w.p));
    }

    #[test]
    fn projective_weights_are_optimal() {
        let p = ModelParams::<f64>::new(1.0, 1.0).unwrap();
        let r = maximize_over_weights(&p, 2, &OptimizerOptions::default()).unwrap();
        assert!((r.value - max_eb_projective(&p)).abs() <= 1e-8);
        assert!(r.converged);
        assert!(r.weights.iter().all(|w| (w.q.abs() - w.p).abs() <= 1e-6));
        assert!(maximize_over_weights(&p, 1, &OptimizerOptions::default()).is_err());
        let four = maximize_over_weights(&p, 4, &OptimizerOptions::default()).unwrap();
        assert!(
            (four.value - r.value).abs() <= 1e-8,
            "{} {}",
            four.value,
            r.value
        );
    }

    #[test]
    fn vanishing_coupling_teleports_nothing() {
        let p = ModelParams::<f64>::new(1.0, 1e-4).unwrap();
        let r = maximize_over_weights(&p, 2, &OptimizerOptions::default()).unwrap();
        assert!(r.value.abs() <= 1e-8);
    }
}
