use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

/// Dense `N × N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<T, const N: usize> {
    entries: [[Complex<T>; N]; N],
}

/// Complex column vector of length `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ket<T, const N: usize> {
    amps: [Complex<T>; N],
}

pub type Operator2<T> = Matrix<T, 2>;
pub type Operator4<T> = Matrix<T, 4>;
pub type StateVector2<T> = Ket<T, 2>;
pub type StateVector4<T> = Ket<T, 4>;

impl<T: Real, const N: usize> Matrix<T, N> {
    pub fn from_rows(entries: [[Complex<T>; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_real(entries: [[T; N]; N]) -> Self {
        Self::from_fn(|i, j| Complex::new(entries[i][j], T::zero()))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut entries = [[Complex::zero(); N]; N];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        }
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self {
            entries: [[Complex::zero(); N]; N],
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    pub fn diagonal(values: [T; N]) -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Complex::new(values[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    pub fn rows(&self) -> &[[Complex<T>; N]; N] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N)
            .map(|i| self.entries[i][i])
            .fold(Complex::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * s)
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// `max |M − M†|`.
    pub fn hermiticity_residual(&self) -> T {
        (*self - self.adjoint()).max_abs()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// `max |M†M − 1|`.
    pub fn unitarity_residual(&self) -> T {
        (self.adjoint() * *self - Self::identity()).max_abs()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: &Ket<T, N>) -> Ket<T, N> {
        Ket::from_fn(|i| (0..N).fold(Complex::zero(), |acc, j| acc + self.entries[i][j] * v[j]))
    }

    /// Column `j` as a ket.
    pub fn column(&self, j: usize) -> Ket<T, N> {
        Ket::from_fn(|i| self.entries[i][j])
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Real, const N: usize> Index<(usize, usize)> for Matrix<T, N> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i][j]
    }
}

impl<T: Real, const N: usize> IndexMut<(usize, usize)> for Matrix<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i][j]
    }
}

impl<T: Real, const N: usize> Add for Matrix<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<T: Real, const N: usize> AddAssign for Matrix<T, N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real, const N: usize> Sub for Matrix<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<T: Real, const N: usize> Neg for Matrix<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real, const N: usize> Mul for Matrix<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| {
            (0..N).fold(Complex::zero(), |acc, l| {
                acc + self.entries[i][l] * rhs.entries[l][j]
            })
        })
    }
}

impl<T: Real, const N: usize> Mul<Ket<T, N>> for Matrix<T, N> {
    type Output = Ket<T, N>;
    fn mul(self, rhs: Ket<T, N>) -> Ket<T, N> {
        self.apply(&rhs)
    }
}

impl<T: Real, const N: usize> Ket<T, N> {
    pub fn new(amps: [Complex<T>; N]) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: [T; N]) -> Self {
        Self::from_fn(|i| Complex::new(amps[i], T::zero()))
    }

    pub fn from_fn(mut f: impl FnMut(usize) -> Complex<T>) -> Self {
        let mut amps = [Complex::zero(); N];
        for (i, a) in amps.iter_mut().enumerate() {
            *a = f(i);
        }
        Self { amps }
    }

    /// Computational basis vector `|i⟩`.
    pub fn basis(i: usize) -> Self {
        Self::from_fn(|j| {
            if i == j {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    pub fn amplitudes(&self) -> &[Complex<T>; N] {
        &self.amps
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i| self.amps[i] * s)
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        Self::from_fn(|i| self.amps[i] * s)
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self.scale(n.recip()))
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }

    /// Outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> Matrix<T, N> {
        Matrix::from_fn(|i, j| self.amps[i] * other.amps[j].conj())
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Matrix<T, N> {
        self.outer(self)
    }

    /// `max_i |self_i − other_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real, const N: usize> Index<usize> for Ket<T, N> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.amps[i]
    }
}

impl<T: Real, const N: usize> Add for Ket<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.amps[i] + rhs.amps[i])
    }
}

impl<T: Real, const N: usize> Sub for Ket<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.amps[i] - rhs.amps[i])
    }
}
