//! Dense complex linear algebra on one and two qubits.
//!
//! Two-qubit basis ordering is A-major: `index = 2·a + b`, with `|+⟩ ↦ 0`.
//! So the basis is `{|++⟩, |+−⟩, |−+⟩, |−−⟩}` and subsystem A is the left,
//! slowly varying Kronecker factor.

mod eig;
mod matrix;
mod pauli;

use num_complex::Complex;
use num_traits::Zero;

pub use eig::{hermitian_eig, matrix_exp_i, propagator, EigenDecomposition};
pub use matrix::{Ket, Matrix, Operator2, Operator4, StateVector2, StateVector4};
pub use pauli::{pauli, pauli_dot, Axis};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a ⊗ b` with `a` acting on subsystem A.
pub fn tensor<T: Real>(a: &Operator2<T>, b: &Operator2<T>) -> Operator4<T> {
    Operator4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

pub fn tensor_ket<T: Real>(a: &StateVector2<T>, b: &StateVector2<T>) -> StateVector4<T> {
    StateVector4::from_fn(|i| a[i / 2] * b[i % 2])
}

/// `op ⊗ 1_B`.
pub fn on_a<T: Real>(op: &Operator2<T>) -> Operator4<T> {
    tensor(op, &Operator2::identity())
}

/// `1_A ⊗ op`.
pub fn on_b<T: Real>(op: &Operator2<T>) -> Operator4<T> {
    tensor(&Operator2::identity(), op)
}

/// Reduced 2×2 operator on the kept subsystem.
pub fn partial_trace<T: Real>(rho: &Operator4<T>, keep: Subsystem) -> Operator2<T> {
    Operator2::from_fn(|r, c| {
        (0..2).fold(Complex::zero(), |acc, s| {
            acc + match keep {
                Subsystem::B => rho[(2 * s + r, 2 * s + c)],
                Subsystem::A => rho[(2 * r + s, 2 * c + s)],
            }
        })
    })
}

/// Hermitian, unit-trace, positive semidefinite 4×4 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    m: Operator4<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, trace and spectrum at `T::CHECK_TOL`.
    pub fn new(m: Operator4<T>) -> Result<Self> {
        let tol = T::check_tol();
        let herm = m.hermiticity_residual();
        if !(herm <= tol) {
            return Err(Error::NonHermitianInput {
                residual: herm.as_f64(),
            });
        }
        let tr = m.trace();
        if !((tr.re - T::one()).abs() <= tol && tr.im.abs() <= tol) {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace {}", tr),
            });
        }
        let eig = hermitian_eig(&m)?;
        if eig.values[0] < -tol {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("negative eigenvalue {}", eig.values[0]),
            });
        }
        Ok(Self { m })
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(psi: &StateVector4<T>) -> Result<Self> {
        if !psi.is_normalized(T::check_tol()) {
            return Err(Error::NotNormalized {
                norm: psi.norm().as_f64(),
            });
        }
        Ok(Self { m: psi.projector() })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Operator4::identity().scale(T::lit(0.25)),
        }
    }

    /// `Σ w_i |ψ_i⟩⟨ψ_i|` over unnormalized kets whose squared norms sum to one.
    pub fn from_ensemble<'a>(kets: impl IntoIterator<Item = &'a StateVector4<T>>) -> Result<Self> {
        let m = kets
            .into_iter()
            .fold(Operator4::zeros(), |acc, k| acc + k.projector());
        Self::new(m)
    }

    pub fn matrix(&self) -> &Operator4<T> {
        &self.m
    }

    pub fn reduce(&self, keep: Subsystem) -> Operator2<T> {
        partial_trace(&self.m, keep)
    }
}

/// States whose expectation value of a Hermitian observable is defined.
pub trait Expectation<T: Real> {
    /// Complex `⟨op⟩` without any Hermiticity check.
    fn raw_expectation(&self, op: &Operator4<T>) -> Complex<T>;

    /// Real `⟨op⟩` for Hermitian `op`.
    fn expectation(&self, op: &Operator4<T>) -> Result<T> {
        let herm = op.hermiticity_residual();
        if !(herm <= T::check_tol()) {
            return Err(Error::NonHermitianInput {
                residual: herm.as_f64(),
            });
        }
        let z = self.raw_expectation(op);
        debug_assert!(z.im.abs() <= T::check_tol() * (T::one() + op.max_abs()));
        Ok(z.re)
    }
}

impl<T: Real> Expectation<T> for StateVector4<T> {
    fn raw_expectation(&self, op: &Operator4<T>) -> Complex<T> {
        self.inner(&op.apply(self))
    }
}

impl<T: Real> Expectation<T> for DensityMatrix<T> {
    fn raw_expectation(&self, op: &Operator4<T>) -> Complex<T> {
        (self.m * *op).trace()
    }
}

/// Free-function form of [`Expectation::expectation`].
pub fn expectation<T: Real, S: Expectation<T>>(state: &S, op: &Operator4<T>) -> Result<T> {
    state.expectation(op)
}
