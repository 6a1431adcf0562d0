//! Measurements on A whose Kraus operators commute with the interaction.
//!
//! Every outcome μ has `M(μ) = e^{iδ}(m + e^{iα} l σ_A^x)`, so the POVM
//! element is `Π(μ) = p + q σ_A^x` with `p = m² + l²` and `q = 2 m l cos α`.
//! The map `(m, l, α) → (p, q)` is many-to-one: the input energy depends on
//! `Σ l²`, so two realizations of the same POVM can inject different energy.

mod file;
mod random;

pub use file::{load_povm, parse_povm, to_json, PovmDocument};
pub use random::{random_kraus_measurement, random_measurement};

use num_complex::Complex;

use crate::error::{Constraint, Error, Result};
use crate::model::{GroundState, ModelParams};
use crate::qmath::{on_a, pauli, tensor, Axis, Operator2, Operator4, StateVector4};
use crate::scalar::Real;

/// Kraus coefficients `(m, l, α, δ)` of one outcome.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KrausCoefficients<T> {
    pub m: T,
    pub l: T,
    pub alpha: T,
    pub delta: T,
}

impl<T: Real> KrausCoefficients<T> {
    pub fn new(m: T, l: T, alpha: T, delta: T) -> Self {
        Self { m, l, alpha, delta }
    }

    pub fn weights(&self) -> OutcomeWeights<T> {
        OutcomeWeights {
            p: self.m * self.m + self.l * self.l,
            q: T::lit(2.0) * self.m * self.l * self.alpha.cos(),
        }
    }

    /// `M = e^{iδ}(m + e^{iα} l σ^x)` on qubit A alone.
    pub fn operator(&self) -> Operator2<T> {
        let global = Complex::from_polar(T::one(), self.delta);
        let cross = Complex::from_polar(self.l, self.alpha);
        let m = Complex::new(self.m, T::zero());
        Operator2::from_rows([[m, cross], [cross, m]]).scale_c(global)
    }

    fn is_finite(&self) -> bool {
        [self.m, self.l, self.alpha, self.delta]
            .iter()
            .all(|x| x.is_finite())
    }
}

/// POVM weights: `Π = p + q σ_A^x`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OutcomeWeights<T> {
    pub p: T,
    pub q: T,
}

impl<T: Real> OutcomeWeights<T> {
    pub fn new(p: T, q: T) -> Self {
        Self { p, q }
    }

    /// `q² / p²`, or `None` for a zero-weight outcome.
    pub fn correlation_ratio(&self) -> Option<T> {
        (self.p >= T::zero_weight()).then(|| {
            let r = self.q / self.p;
            (r * r).min(T::one())
        })
    }

    /// The POVM element `p + q σ^x`.
    pub fn povm_element(&self) -> Operator2<T> {
        Operator2::identity().scale(self.p) + pauli(Axis::X).scale(self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome<T> {
    pub coeffs: KrausCoefficients<T>,
    pub weights: OutcomeWeights<T>,
}

/// A validated measurement with at least one outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementModel<T> {
    outcomes: Vec<Outcome<T>>,
}

/// Outcome of applying the measurement to a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostMeasurement<T> {
    pub index: usize,
    pub probability: T,
    state: Option<StateVector4<T>>,
}

impl<T: Real> PostMeasurement<T> {
    /// `|A(μ)⟩`; zero-weight outcomes have no state.
    pub fn state(&self) -> Result<&StateVector4<T>> {
        self.state.as_ref().ok_or(Error::DegenerateOutcome {
            index: self.index,
            probability: self.probability.as_f64(),
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.state.is_none()
    }
}

fn violation<T: Real>(constraint: Constraint, residual: T) -> Error {
    Error::ConstraintViolation {
        constraint,
        residual: residual.as_f64(),
    }
}

impl<T: Real> MeasurementModel<T> {
    /// Checks both coefficient constraints, completeness and commutation with
    /// `σ_A^x σ_B^x`, then derives the weights.
    pub fn validate(coeffs: Vec<KrausCoefficients<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::TooFewOutcomes { min: 1, got: 0 });
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            let worst = [bad.m, bad.l, bad.alpha, bad.delta]
                .into_iter()
                .find(|x| !x.is_finite())
                .unwrap_or(T::nan());
            return Err(violation(Constraint::Finite, worst));
        }
        let tol = T::check_tol();

        let norm = coeffs.iter().map(|c| c.m * c.m + c.l * c.l).sum::<T>() - T::one();
        if norm.abs() > tol {
            return Err(violation(Constraint::Normalization, norm));
        }
        let balance = coeffs.iter().map(|c| c.m * c.l * c.alpha.cos()).sum::<T>();
        if balance.abs() > tol {
            return Err(violation(Constraint::Balance, balance));
        }

        let completeness = coeffs
            .iter()
            .map(|c| {
                let k = c.operator();
                k.adjoint() * k
            })
            .fold(Operator2::zeros(), |a, b| a + b)
            - Operator2::identity();
        let residual = completeness.max_abs();
        if residual > tol {
            return Err(violation(Constraint::Completeness, residual));
        }

        let xx = tensor(&pauli(Axis::X), &pauli(Axis::X));
        let commutation = coeffs
            .iter()
            .map(|c| on_a(&c.operator()).commutator(&xx).max_abs())
            .fold(T::zero(), T::max);
        if commutation > tol {
            return Err(violation(Constraint::Commutation, commutation));
        }

        let outcomes = coeffs
            .into_iter()
            .map(|coeffs| Outcome {
                weights: coeffs.weights(),
                coeffs,
            })
            .collect();
        Ok(Self { outcomes })
    }

    /// Canonical realization `α = δ = 0`,
    /// `m = (√(p+q) + √(p−q))/2`, `l = (√(p+q) − √(p−q))/2`.
    pub fn from_weights(weights: &[OutcomeWeights<T>]) -> Result<Self> {
        check_weights(weights)?;
        let half = T::lit(0.5);
        let coeffs = weights
            .iter()
            .map(|w| {
                let plus = (w.p + w.q).max(T::zero()).sqrt();
                let minus = (w.p - w.q).max(T::zero()).sqrt();
                KrausCoefficients::new(
                    half * (plus + minus),
                    half * (plus - minus),
                    T::zero(),
                    T::zero(),
                )
            })
            .collect();
        Self::validate(coeffs)
    }

    /// Identity measurement: one outcome, `M = 1`.
    pub fn identity() -> Self {
        Self::validate(vec![KrausCoefficients::new(
            T::one(),
            T::zero(),
            T::zero(),
            T::zero(),
        )])
        .expect("identity measurement is valid")
    }

    /// Projective σ_A^x measurement, outcomes `q = +½` then `q = −½`.
    pub fn projective_x() -> Self {
        let half = T::lit(0.5);
        Self::validate(vec![
            KrausCoefficients::new(half, half, T::zero(), T::zero()),
            KrausCoefficients::new(half, half, T::PI(), T::zero()),
        ])
        .expect("projective measurement is valid")
    }

    /// Symmetric two-outcome measurement with `p = ½`, `q = ±strength/2`.
    pub fn symmetric_pair(strength: T) -> Result<Self> {
        let half = T::lit(0.5);
        let q = half * strength;
        Self::from_weights(&[OutcomeWeights::new(half, q), OutcomeWeights::new(half, -q)])
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[Outcome<T>] {
        &self.outcomes
    }

    pub fn weights(&self) -> Vec<OutcomeWeights<T>> {
        self.outcomes.iter().map(|o| o.weights).collect()
    }

    pub fn coefficients(&self) -> Vec<KrausCoefficients<T>> {
        self.outcomes.iter().map(|o| o.coeffs).collect()
    }

    /// `Σ_μ l_μ²`.
    pub fn sum_l_squared(&self) -> T {
        self.outcomes.iter().map(|o| o.coeffs.l * o.coeffs.l).sum()
    }

    fn outcome(&self, index: usize) -> Result<&Outcome<T>> {
        self.outcomes.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.outcomes.len(),
        })
    }

    pub fn kraus_a(&self, index: usize) -> Result<Operator2<T>> {
        Ok(self.outcome(index)?.coeffs.operator())
    }

    /// `M(μ) ⊗ 1_B`.
    pub fn kraus_on_full_space(&self, index: usize) -> Result<Operator4<T>> {
        Ok(on_a(&self.kraus_a(index)?))
    }

    /// Unnormalized branches `M(μ)|ψ⟩`, one per outcome.
    pub fn branches(&self, psi: &StateVector4<T>) -> Vec<StateVector4<T>> {
        self.outcomes
            .iter()
            .map(|o| on_a(&o.coeffs.operator()).apply(psi))
            .collect()
    }

    /// Outcome probabilities `⟨g|Π(μ)|g⟩` and post-measurement states `|A(μ)⟩`.
    pub fn measure(&self, ground: &GroundState<T>) -> Vec<PostMeasurement<T>> {
        self.branches(&ground.psi)
            .into_iter()
            .enumerate()
            .map(|(index, branch)| {
                let probability = branch.norm_sqr();
                let state = (probability >= T::zero_weight())
                    .then(|| branch.scale(probability.sqrt().recip()));
                PostMeasurement {
                    index,
                    probability,
                    state,
                }
            })
            .collect()
    }

    /// `E_A = (2h²/ε) Σ l²`.
    pub fn input_energy_closed(&self, params: &ModelParams<T>) -> T {
        input_energy_closed(self, params)
    }

    /// Same measurement with every `δ_μ` replaced.
    pub fn with_deltas(&self, deltas: &[T]) -> Result<Self> {
        if deltas.len() != self.len() {
            return Err(Error::PolicyMismatch {
                policy: deltas.len(),
                outcomes: self.len(),
            });
        }
        let coeffs = self
            .outcomes
            .iter()
            .zip(deltas)
            .map(|(o, &delta)| KrausCoefficients { delta, ..o.coeffs })
            .collect();
        Self::validate(coeffs)
    }
}

fn check_weights<T: Real>(weights: &[OutcomeWeights<T>]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::TooFewOutcomes { min: 1, got: 0 });
    }
    if let Some(w) = weights
        .iter()
        .find(|w| !(w.p.is_finite() && w.q.is_finite()))
    {
        return Err(violation(
            Constraint::Finite,
            if w.p.is_finite() { w.q } else { w.p },
        ));
    }
    let tol = T::check_tol();
    let positivity = weights
        .iter()
        .map(|w| w.q.abs() - w.p)
        .fold(T::neg_infinity(), T::max);
    if positivity > tol {
        return Err(violation(Constraint::Positivity, positivity));
    }
    let norm = weights.iter().map(|w| w.p).sum::<T>() - T::one();
    if norm.abs() > tol {
        return Err(violation(Constraint::Normalization, norm));
    }
    let balance = weights.iter().map(|w| w.q).sum::<T>();
    if balance.abs() > tol {
        return Err(violation(Constraint::Balance, balance));
    }
    Ok(())
}

/// Checks a coefficient list and wraps it as a [`MeasurementModel`].
pub fn validate<T: Real>(coeffs: Vec<KrausCoefficients<T>>) -> Result<MeasurementModel<T>> {
    MeasurementModel::validate(coeffs)
}

pub fn weights_to_coeffs<T: Real>(weights: &[OutcomeWeights<T>]) -> Result<MeasurementModel<T>> {
    MeasurementModel::from_weights(weights)
}

pub fn kraus_on_full_space<T: Real>(
    model: &MeasurementModel<T>,
    index: usize,
) -> Result<Operator4<T>> {
    model.kraus_on_full_space(index)
}

pub fn measure<T: Real>(
    model: &MeasurementModel<T>,
    ground: &GroundState<T>,
) -> Vec<PostMeasurement<T>> {
    model.measure(ground)
}

pub fn input_energy_closed<T: Real>(model: &MeasurementModel<T>, params: &ModelParams<T>) -> T {
    let h = params.h();
    T::lit(2.0) * h * h / params.eps() * model.sum_l_squared()
}
