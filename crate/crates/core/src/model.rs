//! The two-qubit transverse-field Ising model and its ground state.
//!
//! ```text
//! H_A = h σ_A^z + h²/ε
//! H_B = h σ_B^z + h²/ε
//! V   = 2k σ_A^x σ_B^x + 2k²/ε        ε = √(h² + k²)
//! ```
//!
//! The constant shifts make `⟨g|H_A|g⟩ = ⟨g|H_B|g⟩ = ⟨g|V|g⟩ = 0` and the
//! lowest eigenvalue of `H = H_A + H_B + V` zero. For test oracles only: the
//! spectrum of `H` is `{0, 2ε − 2k, 2ε + 2k, 4ε}` (even-parity block
//! `{0, 4ε}`, odd-parity block `2ε ± 2k`).

use crate::error::{Error, Result};
use crate::qmath::{on_a, on_b, pauli, tensor, Axis, Expectation, Operator4, StateVector4};
use crate::scalar::Real;

/// Couplings `(h, k)` and the derived constants `ε`, `cos ς`, `sin ς`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    h: T,
    k: T,
    eps: T,
    cos_sigma: T,
    sin_sigma: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(h: T, k: T) -> Result<Self> {
        if !(h > T::zero() && k > T::zero() && h.is_finite() && k.is_finite()) {
            return Err(Error::InvalidParams {
                h: h.as_f64(),
                k: k.as_f64(),
            });
        }
        let eps = h.hypot(k);
        Ok(Self {
            h,
            k,
            eps,
            cos_sigma: h / eps,
            sin_sigma: k / eps,
        })
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn k(&self) -> T {
        self.k
    }

    /// `ε = √(h² + k²)`.
    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn cos_sigma(&self) -> T {
        self.cos_sigma
    }

    pub fn sin_sigma(&self) -> T {
        self.sin_sigma
    }
}

/// Selects one term of the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyTerm {
    A,
    B,
    Interaction,
    Total,
}

/// `H_A`, `H_B`, `V` and their sum.
#[derive(Clone, Copy, Debug)]
pub struct HamiltonianParts<T> {
    pub h_a: Operator4<T>,
    pub h_b: Operator4<T>,
    pub v: Operator4<T>,
    pub h: Operator4<T>,
}

/// Expectation values of the four energy observables in one state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyBreakdown<T> {
    pub h_a: T,
    pub h_b: T,
    pub v: T,
    pub total: T,
}

impl<T: Real> EnergyBreakdown<T> {
    /// Energy near B, `⟨H_B + V⟩`.
    pub fn local_b(&self) -> T {
        self.h_b + self.v
    }
}

pub fn build_hamiltonian<T: Real>(params: &ModelParams<T>) -> HamiltonianParts<T> {
    let (h, k, eps) = (params.h, params.k, params.eps);
    let id = Operator4::<T>::identity();
    let shift = h * h / eps;
    let h_a = on_a(&pauli(Axis::Z)).scale(h) + id.scale(shift);
    let h_b = on_b(&pauli(Axis::Z)).scale(h) + id.scale(shift);
    let two = T::lit(2.0);
    let v = tensor(&pauli(Axis::X), &pauli(Axis::X)).scale(two * k) + id.scale(two * k * k / eps);
    HamiltonianParts {
        h_a,
        h_b,
        v,
        h: h_a + h_b + v,
    }
}

impl<T: Real> HamiltonianParts<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        build_hamiltonian(params)
    }

    pub fn observable(&self, term: EnergyTerm) -> &Operator4<T> {
        match term {
            EnergyTerm::A => &self.h_a,
            EnergyTerm::B => &self.h_b,
            EnergyTerm::Interaction => &self.v,
            EnergyTerm::Total => &self.h,
        }
    }

    /// `H_B + V`.
    pub fn local_b(&self) -> Operator4<T> {
        self.h_b + self.v
    }

    pub fn energies<S: Expectation<T>>(&self, state: &S) -> EnergyBreakdown<T> {
        EnergyBreakdown {
            h_a: state.raw_expectation(&self.h_a).re,
            h_b: state.raw_expectation(&self.h_b).re,
            v: state.raw_expectation(&self.v).re,
            total: state.raw_expectation(&self.h).re,
        }
    }
}

/// The four observables `(H_A, H_B, V, H)`.
pub fn energy_observables<T: Real>(parts: &HamiltonianParts<T>) -> [&Operator4<T>; 4] {
    [&parts.h_a, &parts.h_b, &parts.v, &parts.h]
}

/// Zero-energy eigenstate of `H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundState<T> {
    pub psi: StateVector4<T>,
}

/// `|g⟩ = √((1 − cos ς)/2) |++⟩ − √((1 + cos ς)/2) |−−⟩`.
pub fn ground_state<T: Real>(params: &ModelParams<T>) -> GroundState<T> {
    let half = T::lit(0.5);
    let c = params.cos_sigma;
    let plus = (half * (T::one() - c)).max(T::zero()).sqrt();
    let minus = (half * (T::one() + c)).sqrt();
    GroundState {
        psi: StateVector4::from_real([plus, T::zero(), T::zero(), -minus]),
    }
}

impl<T: Real> GroundState<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        ground_state(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{expectation, hermitian_eig};

    fn unit() -> ModelParams<f64> {
        ModelParams::<f64>::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn rejects_nonpositive_couplings() {
        for (h, k) in [
            (0.0, 1.0),
            (1.0, 0.0),
            (-1.0, 1.0),
            (1.0, f64::NAN),
            (f64::INFINITY, 1.0),
        ] {
            assert!(matches!(
                ModelParams::<f64>::new(h, k),
                Err(Error::InvalidParams { .. })
            ));
        }
    }

    #[test]
    fn derived_constants() {
        let p = ModelParams::<f64>::new(3.0, 4.0).unwrap();
        assert_eq!(p.eps(), 5.0);
        assert!((p.cos_sigma() - 0.6).abs() < 1e-15);
        assert!((p.sin_sigma() - 0.8).abs() < 1e-15);
        assert!((p.cos_sigma().powi(2) + p.sin_sigma().powi(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unit_spectrum() {
        let parts = build_hamiltonian(&unit());
        let eig = hermitian_eig(&parts.h).unwrap();
        // 0, 2√2 − 2, 2√2 + 2, 4√2
        let expected = [
            0.0,
            0.828_427_124_746_190_1,
            4.828_427_124_746_19,
            5.656_854_249_492_38,
        ];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn parts_sum_and_hermitian() {
        let parts = build_hamiltonian(&ModelParams::<f64>::new(0.3, 2.2).unwrap());
        assert!((parts.h_a + parts.h_b + parts.v - parts.h).max_abs() <= 1e-14);
        for op in energy_observables(&parts) {
            assert!(op.is_hermitian(0.0));
        }
    }

    #[test]
    fn local_hamiltonian_has_negative_eigenvalue() {
        let parts = build_hamiltonian(&unit());
        let eig = hermitian_eig(&parts.h_b).unwrap();
        assert!((eig.values[0] - (std::f64::consts::FRAC_1_SQRT_2 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn ground_state_amplitudes() {
        let g = ground_state(&unit()).psi;
        assert!((g[0].re - 0.382_683_432_365_089_8).abs() < 1e-12);
        assert!((g[3].re + 0.923_879_532_511_286_8).abs() < 1e-12);
        assert_eq!(g[1].norm() + g[2].norm(), 0.0);
        assert!(g.is_normalized(1e-15));
    }

    #[test]
    fn ground_state_is_annihilated() {
        let p = unit();
        let parts = build_hamiltonian(&p);
        let g = ground_state(&p).psi;
        assert!(parts.h.apply(&g).norm() < 1e-12);
        let e = parts.energies(&g);
        for v in [e.h_a, e.h_b, e.v, e.total] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn weak_transverse_coupling_limit() {
        let g = ground_state(&ModelParams::<f64>::new(1.0, 1e-6).unwrap()).psi;
        assert!(g[0].norm() < 1e-6);
        assert!((g[3].re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_local_energy() {
        let parts = build_hamiltonian(&unit());
        let e = expectation(&StateVector4::<f64>::basis(0), &parts.h_a).unwrap();
        assert!((e - (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-14);
    }

    #[test]
    fn f32_ground_state() {
        let p = ModelParams::<f32>::new(0.7, 1.3).unwrap();
        let parts = build_hamiltonian(&p);
        assert!(parts.h.apply(&ground_state(&p).psi).norm() < 1e-5);
    }
}
