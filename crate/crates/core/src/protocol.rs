//! Brute-force simulation of the teleportation protocol on the full
//! four-dimensional Hilbert space.
//!
//! A measures the ground state, the outcome μ reaches B instantly, and B
//! applies `U_B(μ) = cos ω + i n⃗·σ⃗_B sin ω`. The energy B hands to the
//! outside world is `E_B = −Tr[ρ(H_B + V)]` where `ρ` is the averaged final
//! state. Nothing here uses the closed forms except the fields explicitly
//! named `*_closed`.

use num_complex::Complex;

use crate::analytic::{bounds, max_eb_closed, q_of};
use crate::entanglement::consumption;
use crate::error::{Error, Result};
use crate::measurement::MeasurementModel;
use crate::model::{
    build_hamiltonian, ground_state, EnergyBreakdown, HamiltonianParts, ModelParams,
};
use crate::qmath::{
    hermitian_eig, on_b, pauli_dot, propagator, DensityMatrix, EigenDecomposition, Expectation,
    Operator2, Operator4, StateVector4,
};
use crate::scalar::Real;

/// `cos ω + i n⃗·σ⃗ sin ω` on qubit B.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalUnitary<T> {
    pub omega: T,
    pub axis: [T; 3],
}

impl<T: Real> LocalUnitary<T> {
    /// Requires `|n⃗| = 1` within `1e-12` (or a few ulps for `f32`).
    pub fn new(omega: T, axis: [T; 3]) -> Result<Self> {
        let norm = axis.iter().map(|&a| a * a).sum::<T>().sqrt();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
        if !((norm - T::one()).abs() <= tol && omega.is_finite()) {
            return Err(Error::InvalidAxis {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { omega, axis })
    }

    /// Rescales `axis` to unit length.
    pub fn normalized(omega: T, axis: [T; 3]) -> Result<Self> {
        let norm = axis.iter().map(|&a| a * a).sum::<T>().sqrt();
        if !(norm > T::zero() && norm.is_finite()) {
            return Err(Error::InvalidAxis {
                norm: norm.as_f64(),
            });
        }
        Self::new(omega, axis.map(|a| a / norm))
    }

    pub fn identity() -> Self {
        Self {
            omega: T::zero(),
            axis: [T::zero(), T::zero(), T::one()],
        }
    }

    /// Rotation about y, the optimal feedback axis.
    pub fn about_y(omega: T) -> Self {
        Self {
            omega,
            axis: [T::zero(), T::one(), T::zero()],
        }
    }

    pub fn matrix(&self) -> Operator2<T> {
        let i_sin = Complex::new(T::zero(), self.omega.sin());
        Operator2::identity().scale(self.omega.cos()) + pauli_dot(self.axis).scale_c(i_sin)
    }

    /// `1_A ⊗ U`.
    pub fn on_b(&self) -> Operator4<T> {
        on_b(&self.matrix())
    }
}

/// One local unitary per measurement outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackPolicy<T> {
    unitaries: Vec<LocalUnitary<T>>,
}

impl<T: Real> FeedbackPolicy<T> {
    pub fn new(unitaries: Vec<LocalUnitary<T>>) -> Self {
        Self { unitaries }
    }

    /// The same unitary for every outcome, i.e. no use of the announced μ.
    pub fn uniform(unitary: LocalUnitary<T>, outcomes: usize) -> Self {
        Self {
            unitaries: vec![unitary; outcomes],
        }
    }

    pub fn identity(outcomes: usize) -> Self {
        Self::uniform(LocalUnitary::identity(), outcomes)
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn unitaries(&self) -> &[LocalUnitary<T>] {
        &self.unitaries
    }

    /// Reassigns unitaries: outcome `i` receives entry `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            unitaries: order.iter().map(|&i| self.unitaries[i]).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeRecord<T> {
    pub probability: T,
    /// Energies of the normalized state `U_B(μ)|A(μ)⟩`; zero for empty outcomes.
    pub energies: EnergyBreakdown<T>,
}

/// Full energy and entanglement accounting of one protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolReport<T> {
    /// `Σ ⟨g|M†HM|g⟩`.
    pub input_energy: T,
    /// `(2h²/ε) Σ l²`.
    pub input_energy_closed: T,
    /// `−Tr[ρ(H_B + V)]` for the given policy.
    pub teleported_energy: T,
    /// `(1/ε) Σ Q(μ)` for the given policy.
    pub teleported_energy_closed: T,
    /// Best `E_B` over all policies for this measurement (closed form).
    pub max_teleported_energy: T,
    /// `Tr[ρH]`.
    pub total_final_energy: T,
    pub per_outcome: Vec<OutcomeRecord<T>>,
    /// `ΔS_AB` in nats.
    pub delta_s: T,
    /// `I_ĀB` in nats.
    pub mutual_info: T,
    /// `ΔS_AB`, left side of the consumption bound.
    pub bound32_lhs: T,
    /// `c32 · max E_B / ε`.
    pub bound32_rhs: T,
    /// `max E_B`, left side of the energy bound.
    pub bound770_lhs: T,
    /// `c770 · ΔS_AB`.
    pub bound770_rhs: T,
}

impl<T: Real> ProtocolReport<T> {
    pub fn slack32(&self) -> T {
        self.bound32_lhs - self.bound32_rhs
    }

    pub fn slack770(&self) -> T {
        self.bound770_lhs - self.bound770_rhs
    }
}

fn check_policy<T: Real>(model: &MeasurementModel<T>, policy: &FeedbackPolicy<T>) -> Result<()> {
    if model.len() != policy.len() {
        return Err(Error::PolicyMismatch {
            policy: policy.len(),
            outcomes: model.len(),
        });
    }
    Ok(())
}

/// Post-operation branches `U_B(μ) M(μ)|g⟩`, unnormalized.
fn final_branches<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    policy: &FeedbackPolicy<T>,
) -> Result<Vec<StateVector4<T>>> {
    check_policy(model, policy)?;
    let g = ground_state(params);
    Ok(model
        .branches(&g.psi)
        .into_iter()
        .zip(policy.unitaries())
        .map(|(b, u)| u.on_b().apply(&b))
        .collect())
}

/// `ρ = Σ U_B(μ) M(μ)|g⟩⟨g|M(μ)† U_B(μ)†`.
pub fn average_state<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    policy: &FeedbackPolicy<T>,
) -> Result<DensityMatrix<T>> {
    DensityMatrix::from_ensemble(final_branches(params, model, policy)?.iter())
}

/// `Σ ⟨g|M†HM|g⟩`.
pub fn input_energy<T: Real>(params: &ModelParams<T>, model: &MeasurementModel<T>) -> T {
    let parts = build_hamiltonian(params);
    model
        .branches(&ground_state(params).psi)
        .iter()
        .map(|b| b.raw_expectation(&parts.h).re)
        .sum()
}

/// Runs the protocol and fills every report field.
pub fn run<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    policy: &FeedbackPolicy<T>,
) -> Result<ProtocolReport<T>> {
    let parts = build_hamiltonian(params);
    let branches = final_branches(params, model, policy)?;
    let rho = DensityMatrix::from_ensemble(branches.iter())?;
    let local_b = parts.local_b();

    let per_outcome = branches
        .iter()
        .map(|b| {
            let probability = b.norm_sqr();
            let energies = if probability >= T::zero_weight() {
                parts.energies(&b.scale(probability.sqrt().recip()))
            } else {
                EnergyBreakdown::default()
            };
            OutcomeRecord {
                probability,
                energies,
            }
        })
        .collect();

    let eps = params.eps();
    let teleported_energy_closed = model
        .weights()
        .iter()
        .zip(policy.unitaries())
        .map(|(w, u)| q_of(params, w.p, w.q, u.omega, u.axis))
        .sum::<T>()
        / eps;

    let weights = model.weights();
    let max_teleported_energy = max_eb_closed(params, &weights);
    let entanglement = consumption(params, model)?;
    let coefficients = bounds(params);

    Ok(ProtocolReport {
        input_energy: input_energy(params, model),
        input_energy_closed: model.input_energy_closed(params),
        teleported_energy: -rho.raw_expectation(&local_b).re,
        teleported_energy_closed,
        max_teleported_energy,
        total_final_energy: rho.raw_expectation(&parts.h).re,
        per_outcome,
        delta_s: entanglement.delta_s,
        mutual_info: entanglement.mutual_info,
        bound32_lhs: entanglement.delta_s,
        bound32_rhs: coefficients.consumption_bound(params, max_teleported_energy),
        bound770_lhs: max_teleported_energy,
        bound770_rhs: coefficients.energy_bound(entanglement.delta_s),
    })
}

/// Brute-force `E_B` only, without the entanglement bookkeeping of [`run`].
pub fn teleported_energy<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    policy: &FeedbackPolicy<T>,
) -> Result<T> {
    let local_b = build_hamiltonian(params).local_b();
    Ok(-final_branches(params, model, policy)?
        .iter()
        .map(|b| b.raw_expectation(&local_b).re)
        .sum::<T>())
}

/// y-axis rotation by `Ω_μ` per outcome, with `2Ω_μ` recovered by `atan2`
/// from `(cos 2Ω, sin 2Ω)`. `Ω` is defined modulo π.
pub fn optimal_policy<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
) -> FeedbackPolicy<T> {
    FeedbackPolicy::new(
        model
            .weights()
            .iter()
            .map(|w| {
                if w.p < T::zero_weight() {
                    return LocalUnitary::about_y(T::zero());
                }
                let (cos2, sin2) = crate::analytic::optimal_rotation(params, w.p, w.q);
                LocalUnitary::about_y(sin2.atan2(cos2) / T::lit(2.0))
            })
            .collect(),
    )
}

/// Energy change when B applies the same unitary `W` whatever the outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassiveEnergy<T> {
    /// `Tr[ωH] − E_A` with `ω = W(Σ M|g⟩⟨g|M†)W†`.
    pub difference: T,
    /// `⟨g|W†(H_B + V)W|g⟩`.
    pub local_form: T,
    /// `⟨g|W†HW|g⟩`.
    pub total_form: T,
}

pub fn passive_unitary_energy<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    w: &LocalUnitary<T>,
) -> Result<PassiveEnergy<T>> {
    let parts = build_hamiltonian(params);
    let policy = FeedbackPolicy::uniform(*w, model.len());
    let omega = average_state(params, model, &policy)?;
    let difference = omega.raw_expectation(&parts.h).re - input_energy(params, model);
    let rotated = w.on_b().apply(&ground_state(params).psi);
    Ok(PassiveEnergy {
        difference,
        local_form: rotated.raw_expectation(&parts.local_b()).re,
        total_form: rotated.raw_expectation(&parts.h).re,
    })
}

/// One point of the post-measurement free evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionSample<T> {
    pub t: T,
    /// `Σ p ⟨A(μ)|e^{itH} H_B e^{−itH}|A(μ)⟩` via the spectral decomposition of `H`.
    pub hb_bruteforce: T,
    /// `(h² Σ l² / ε)(1 − cos 4kt)`.
    pub hb_closed: T,
    /// `⟨V(t)⟩`, identically zero.
    pub v_expect: T,
}

/// Free evolution of the averaged post-measurement state (no feedback).
#[derive(Clone, Debug)]
pub struct TimeEvolution<T> {
    params: ModelParams<T>,
    parts: HamiltonianParts<T>,
    spectrum: EigenDecomposition<T, 4>,
    branches: Vec<StateVector4<T>>,
    sum_l2: T,
}

impl<T: Real> TimeEvolution<T> {
    pub fn new(params: &ModelParams<T>, model: &MeasurementModel<T>) -> Result<Self> {
        let parts = build_hamiltonian(params);
        let spectrum = hermitian_eig(&parts.h)?;
        Ok(Self {
            params: *params,
            spectrum,
            branches: model.branches(&ground_state(params).psi),
            sum_l2: model.sum_l_squared(),
            parts,
        })
    }

    pub fn closed_form(&self, t: T) -> T {
        let h = self.params.h();
        h * h * self.sum_l2 / self.params.eps()
            * (T::one() - (T::lit(4.0) * self.params.k() * t).cos())
    }

    pub fn at(&self, t: T) -> EvolutionSample<T> {
        let u = propagator(&self.spectrum, t);
        let (mut hb, mut v) = (T::zero(), T::zero());
        for b in &self.branches {
            let evolved = u.apply(b);
            hb += evolved.raw_expectation(&self.parts.h_b).re;
            v += evolved.raw_expectation(&self.parts.v).re;
        }
        EvolutionSample {
            t,
            hb_bruteforce: hb,
            hb_closed: self.closed_form(t),
            v_expect: v,
        }
    }
}

pub fn evolve_hb<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
    t: T,
) -> Result<EvolutionSample<T>> {
    Ok(TimeEvolution::new(params, model)?.at(t))
}
