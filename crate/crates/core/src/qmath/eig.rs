use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `M = U Λ U†` of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct EigenDecomposition<T, const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [T; N],
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: Matrix<T, N>,
}

impl<T: Real, const N: usize> EigenDecomposition<T, N> {
    /// Rebuilds `U f(Λ) U†` for a complex-valued spectral function.
    pub fn map_spectrum(&self, f: impl Fn(T) -> Complex<T>) -> Matrix<T, N> {
        let u = &self.vectors;
        Matrix::from_fn(|i, j| {
            (0..N).fold(Complex::zero(), |acc, l| {
                acc + u[(i, l)] * f(self.values[l]) * u[(j, l)].conj()
            })
        })
    }

    pub fn reconstruct(&self) -> Matrix<T, N> {
        self.map_spectrum(|x| Complex::new(x, T::zero()))
    }
}

fn off_diagonal_norm<T: Real, const N: usize>(a: &Matrix<T, N>) -> T {
    let mut s = T::zero();
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi eigensolver for small Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies the
/// real symmetric Jacobi rotation that zeroes it. Sweeps stop once the
/// off-diagonal Frobenius norm falls below `T::JACOBI_TOL · max(1, ‖M‖_F)`.
pub fn hermitian_eig<T: Real, const N: usize>(
    m: &Matrix<T, N>,
) -> Result<EigenDecomposition<T, N>> {
    let residual = m.hermiticity_residual();
    if !(residual <= T::check_tol()) {
        return Err(Error::NonHermitianInput {
            residual: residual.as_f64(),
        });
    }
    let half = T::lit(0.5);
    let mut a = (*m + m.adjoint()).scale(half);
    let mut v = Matrix::<T, N>::identity();
    let threshold = T::lit(T::JACOBI_TOL) * a.frobenius().max(T::one());

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..N.saturating_sub(1) {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        if off > threshold {
            return Err(Error::EigenNoConvergence {
                off_norm: off.as_f64(),
            });
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = std::array::from_fn(|i| a[(order[i], order[i])].re);
    let vectors = Matrix::from_fn(|i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

fn rotate<T: Real, const N: usize>(a: &mut Matrix<T, N>, v: &mut Matrix<T, N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let phase = apq / r;
    let two = T::lit(2.0);
    let theta = (a[(q, q)].re - a[(p, p)].re) / (two * r);
    let t = {
        let t = (theta.abs() + (theta * theta + T::one()).sqrt()).recip();
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = (t * t + T::one()).sqrt().recip();
    let s = t * c;

    // G = diag(1, e^{-iφ}) on (p, q) followed by the real rotation [[c, s], [-s, c]].
    let mut g = Matrix::<T, N>::identity();
    let cc = Complex::new(c, T::zero());
    g[(p, p)] = cc;
    g[(p, q)] = Complex::new(s, T::zero());
    g[(q, p)] = phase.conj() * (-s);
    g[(q, q)] = phase.conj() * c;

    *a = g.adjoint() * *a * g;
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    for i in 0..N {
        a[(i, i)].im = T::zero();
    }
    *v = *v * g;
}

/// `exp(−i t M)` for Hermitian `M`, built from its eigendecomposition.
pub fn matrix_exp_i<T: Real, const N: usize>(m: &Matrix<T, N>, t: T) -> Result<Matrix<T, N>> {
    let eig = hermitian_eig(m)?;
    Ok(propagator(&eig, t))
}

/// `exp(−i t M)` from a precomputed decomposition of `M`.
pub fn propagator<T: Real, const N: usize>(eig: &EigenDecomposition<T, N>, t: T) -> Matrix<T, N> {
    eig.map_spectrum(|lambda| {
        let phase = -lambda * t;
        Complex::new(phase.cos(), phase.sin())
    })
}
