//! Real scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating point type the laboratory can run on: `f32` or `f64`.
///
/// The associated tolerances are the thresholds at which the library
/// itself validates invariants (Hermiticity, trace, constraint residuals).
/// They are scaled to the precision of the type.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Residual accepted for identities that hold exactly in real arithmetic.
    const CHECK_TOL: f64;
    /// Relative off-diagonal threshold that stops the Jacobi sweeps.
    const JACOBI_TOL: f64;
    /// Outcome probabilities below this are treated as zero-weight.
    const ZERO_WEIGHT: f64;

    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for the finite literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("finite literal")
    }

    #[inline]
    fn check_tol() -> Self {
        Self::lit(Self::CHECK_TOL)
    }

    #[inline]
    fn zero_weight() -> Self {
        Self::lit(Self::ZERO_WEIGHT)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const CHECK_TOL: f64 = 1e-10;
    const JACOBI_TOL: f64 = 1e-14;
    const ZERO_WEIGHT: f64 = 1e-14;
}

impl Real for f32 {
    const CHECK_TOL: f64 = 1e-4;
    const JACOBI_TOL: f64 = 1e-6;
    const ZERO_WEIGHT: f64 = 1e-7;
}

/// `x ln x` with the `0 ln 0 = 0` limit.
///
/// Arguments within round-off of zero (including tiny negatives) map to zero.
#[inline]
pub fn xlnx<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.ln()
    }
}

/// Shannon entropy in nats of a probability vector.
pub fn shannon<T: Real>(probs: impl IntoIterator<Item = T>) -> T {
    -probs.into_iter().map(xlnx).sum::<T>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xlnx_limits() {
        assert_eq!(xlnx(0.0_f64), 0.0);
        assert_eq!(xlnx(-1e-17_f64), 0.0);
        assert_eq!(xlnx(1.0_f64), 0.0);
        assert!((xlnx(0.5_f64) + 0.5 * std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn shannon_of_fair_coin_is_ln2() {
        let s = shannon([0.5_f64, 0.5]);
        assert!((s - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((shannon([0.5_f32, 0.5]) - std::f32::consts::LN_2).abs() < 1e-6);
    }
}
