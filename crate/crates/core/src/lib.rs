//! Exact numerical laboratory for the minimal two-qubit quantum energy
//! teleportation model.
//!
//! Qubits A and B interact through a transverse-field Ising Hamiltonian.
//! A measures, announces its outcome classically, and B applies an
//! outcome-dependent rotation that extracts energy from its zero-point
//! fluctuation. Every closed form in [`analytic`] has a brute-force
//! counterpart in [`protocol`], [`entanglement`] or [`optimizer`].
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`, which is what the tools use.

// `!(x <= tol)` style comparisons are there to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod entanglement;
pub mod error;
pub mod measurement;
pub mod model;
pub mod optimizer;
pub mod protocol;
pub mod qmath;
pub mod scalar;

pub use error::{Constraint, Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Operator2 = qmath::Operator2<f64>;
pub type Operator4 = qmath::Operator4<f64>;
pub type StateVector4 = qmath::StateVector4<f64>;
pub type DensityMatrix = qmath::DensityMatrix<f64>;
pub type ModelParams = model::ModelParams<f64>;
pub type HamiltonianParts = model::HamiltonianParts<f64>;
pub type GroundState = model::GroundState<f64>;
pub type KrausCoefficients = measurement::KrausCoefficients<f64>;
pub type OutcomeWeights = measurement::OutcomeWeights<f64>;
pub type MeasurementModel = measurement::MeasurementModel<f64>;
pub type LocalUnitary = protocol::LocalUnitary<f64>;
pub type FeedbackPolicy = protocol::FeedbackPolicy<f64>;
pub type ProtocolReport = protocol::ProtocolReport<f64>;
pub type EntanglementReport = entanglement::EntanglementReport<f64>;
pub type BoundCoefficients = analytic::BoundCoefficients<f64>;
pub type OptimizationResult = optimizer::OptimizationResult<f64>;
