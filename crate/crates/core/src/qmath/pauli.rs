use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::Operator2;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Pauli matrix in the σ^z eigenbasis `{|+⟩, |−⟩}` (σ^z|+⟩ = +|+⟩).
pub fn pauli<T: Real>(axis: Axis) -> Operator2<T> {
    let (o, z) = (Complex::<T>::one(), Complex::<T>::zero());
    let i = Complex::new(T::zero(), T::one());
    match axis {
        Axis::X => Operator2::from_rows([[z, o], [o, z]]),
        Axis::Y => Operator2::from_rows([[z, -i], [i, z]]),
        Axis::Z => Operator2::from_rows([[o, z], [z, -o]]),
    }
}

/// `n⃗·σ⃗` for a real 3-vector.
pub fn pauli_dot<T: Real>(n: [T; 3]) -> Operator2<T> {
    pauli::<T>(Axis::X).scale(n[0])
        + pauli::<T>(Axis::Y).scale(n[1])
        + pauli::<T>(Axis::Z).scale(n[2])
}
