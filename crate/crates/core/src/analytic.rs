//! Closed forms for the optimal teleported energy and the entanglement it
//! consumes.
//!
//! Per outcome with weights `(p, q)` and feedback rotation `(ω, n⃗)`:
//!
//! ```text
//! X = p[h²(1 − n_z²) + 2k²(1 − n_x²)] − 3hk q n_x n_z
//! Q = X cos 2ω − hk q n_y sin 2ω − X            E_B = (1/ε) Σ_μ Q(μ)
//! ```
//!
//! Maximizing over ω, then over the in-plane angle ψ (with
//! `n_x = √z cos ψ`, `n_z = √z sin ψ`), leaves `T(z)`, which peaks at
//! `z = 0`. That is, the best rotation axis is y.

use crate::error::{Error, Result};
use crate::measurement::OutcomeWeights;
use crate::model::ModelParams;
use crate::scalar::{xlnx, Real};

fn domain<T: Real>(name: &'static str, value: T, domain: &'static str) -> Error {
    Error::DomainError {
        name,
        value: value.as_f64(),
        domain,
    }
}

fn check_unit_interval<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(domain(name, x, "[0, 1]"))
    }
}

/// `X(μ)` for a rotation axis `n⃗`.
pub fn x_of<T: Real>(params: &ModelParams<T>, p: T, q: T, n: [T; 3]) -> T {
    let (h, k) = (params.h(), params.k());
    let two = T::lit(2.0);
    p * (h * h * (T::one() - n[2] * n[2]) + two * k * k * (T::one() - n[0] * n[0]))
        - T::lit(3.0) * h * k * q * n[0] * n[2]
}

/// `Q(μ)`; the outcome's contribution to `ε · E_B`.
pub fn q_of<T: Real>(params: &ModelParams<T>, p: T, q: T, omega: T, n: [T; 3]) -> T {
    let x = x_of(params, p, q, n);
    let two_omega = T::lit(2.0) * omega;
    x * two_omega.cos() - params.h() * params.k() * q * n[1] * two_omega.sin() - x
}

/// `max_ω Q = √(X² + (hk q n_y)²) − X`.
pub fn max_over_omega<T: Real>(params: &ModelParams<T>, p: T, q: T, n: [T; 3]) -> T {
    let x = x_of(params, p, q, n);
    let s = params.h() * params.k() * q * n[1];
    x.hypot(s) - x
}

/// `(cos 2Ω, sin 2Ω)` of the optimal y-axis rotation for an outcome.
///
/// Returns `(1, 0)` when both numerators vanish (zero-weight outcome).
pub fn optimal_rotation<T: Real>(params: &ModelParams<T>, p: T, q: T) -> (T, T) {
    let (h, k) = (params.h(), params.k());
    let a = (h * h + T::lit(2.0) * k * k) * p;
    let c = h * k * q;
    let r = a.hypot(c);
    if r == T::zero() {
        (T::one(), T::zero())
    } else {
        (a / r, -c / r)
    }
}

/// `min_ψ X` at fixed `z = 1 − n_y²`.
pub fn min_x_over_psi<T: Real>(params: &ModelParams<T>, p: T, q: T, z: T) -> Result<T> {
    check_unit_interval("z", z)?;
    let (h, k) = (params.h(), params.k());
    let (h2, k2) = (h * h, k * k);
    let two = T::lit(2.0);
    let half_z = z / two;
    let spread = ((h2 - two * k2) * p).hypot(T::lit(3.0) * h * k * q);
    Ok((T::one() - half_z) * p * (h2 + two * k2) - half_z * spread)
}

/// Coefficients of `T(z) = √((a − bz)² + c(1 − z)) − (a − bz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeObjective<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// Which side of `a = b` an outcome falls on; `t(1)` has a different closed
/// form in each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    AAtLeastB,
    AAtMostB,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TSignVerdict<T> {
    pub regime: Regime,
    /// `t(1)` evaluated from its definition.
    pub t_at_one: T,
    /// `t(1)` from the regime's closed form: `−h²k²q²` or `−8h²k²(p² − q²)`.
    pub t_at_one_closed: T,
    /// Largest `t(z)` on the scan grid.
    pub max_t: T,
    /// Largest `T(z) − T(0)` on the scan grid.
    pub max_rise: T,
}

impl<T: Real> TSignVerdict<T> {
    pub fn holds(&self, tol: T) -> bool {
        self.max_t <= tol && self.max_rise <= tol
    }
}

impl<T: Real> OutcomeObjective<T> {
    pub fn new(params: &ModelParams<T>, p: T, q: T) -> Self {
        let (h, k) = (params.h(), params.k());
        let (h2, k2) = (h * h, k * k);
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let a = p * (h2 + two * k2);
        let b = half * a + half * ((h2 - two * k2) * p).hypot(T::lit(3.0) * h * k * q);
        let c = h2 * k2 * q * q;
        Self { a, b, c }
    }

    fn root(&self, z: T) -> T {
        let d = self.a - self.b * z;
        (d * d + self.c * (T::one() - z)).sqrt()
    }

    /// `T(z)`.
    pub fn value(&self, z: T) -> Result<T> {
        check_unit_interval("z", z)?;
        Ok(self.root(z) - (self.a - self.b * z))
    }

    /// `t(z) = −c + 2b(√(…) − (a − bz))`.
    pub fn t(&self, z: T) -> Result<T> {
        check_unit_interval("z", z)?;
        Ok(-self.c + T::lit(2.0) * self.b * (self.root(z) - (self.a - self.b * z)))
    }

    /// `∂_z T = t(z) / (2√(…))`.
    pub fn derivative(&self, z: T) -> Result<T> {
        let t = self.t(z)?;
        Ok(t / (T::lit(2.0) * self.root(z)))
    }
}

/// `T(z)` for one outcome.
pub fn t_profile<T: Real>(params: &ModelParams<T>, p: T, q: T, z: T) -> Result<T> {
    OutcomeObjective::new(params, p, q).value(z)
}

/// Scans `z ∈ [0, 1]` on `points` nodes and reports the sign of `t` and
/// whether `T` ever rises above `T(0)`.
pub fn t_sign_check<T: Real>(
    params: &ModelParams<T>,
    p: T,
    q: T,
    points: usize,
) -> TSignVerdict<T> {
    let obj = OutcomeObjective::new(params, p, q);
    let t0 = obj.value(T::zero()).expect("0 in domain");
    let n = points.max(2);
    let mut max_t = T::neg_infinity();
    let mut max_rise = T::neg_infinity();
    for i in 0..n {
        let z = T::lit(i as f64 / (n - 1) as f64);
        max_t = max_t.max(obj.t(z).expect("grid in domain"));
        max_rise = max_rise.max(obj.value(z).expect("grid in domain") - t0);
    }
    let (hk2, regime) = (
        params.h() * params.h() * params.k() * params.k(),
        if obj.a >= obj.b {
            Regime::AAtLeastB
        } else {
            Regime::AAtMostB
        },
    );
    let t_at_one_closed = match regime {
        Regime::AAtLeastB => -hk2 * q * q,
        Regime::AAtMostB => -T::lit(8.0) * hk2 * (p * p - q * q),
    };
    TSignVerdict {
        regime,
        t_at_one: obj.t(T::one()).expect("1 in domain"),
        t_at_one_closed,
        max_t,
        max_rise,
    }
}

/// Maximum teleported energy over all feedback rotations,
/// `((h² + 2k²)/ε) Σ p [√(1 + h²k² q² / ((h² + 2k²)² p²)) − 1]`.
pub fn max_eb_closed<T: Real>(params: &ModelParams<T>, weights: &[OutcomeWeights<T>]) -> T {
    let (h, k) = (params.h(), params.k());
    let g = h * h + T::lit(2.0) * k * k;
    let coupling = h * k / g;
    weights
        .iter()
        .filter_map(|w| w.correlation_ratio().map(|x| (w.p, x)))
        .map(|(p, x)| {
            let u = coupling * coupling * x;
            // √(1 + u) − 1 without cancellation.
            p * u / ((T::one() + u).sqrt() + T::one())
        })
        .sum::<T>()
        * g
        / params.eps()
}

/// Maximum over all measurements, attained by projective ones (`|q| = p`).
pub fn max_eb_projective<T: Real>(params: &ModelParams<T>) -> T {
    let (h, k) = (params.h(), params.k());
    let g = h * h + T::lit(2.0) * k * k;
    let u = (h * k / g).powi(2);
    g / params.eps() * (u / ((T::one() + u).sqrt() + T::one()))
}

/// `ln((1 + cos ς)/(1 − cos ς))`, evaluated as `2 ln((1 + cos ς)/sin ς)`.
fn log_ratio<T: Real>(params: &ModelParams<T>) -> T {
    T::lit(2.0) * ((T::one() + params.cos_sigma()) / params.sin_sigma()).ln()
}

/// Energy profile `f_E(x)`, with `max E_B = Σ p f_E(q²/p²)`.
pub fn f_e<T: Real>(params: &ModelParams<T>, x: T) -> Result<T> {
    check_unit_interval("x", x)?;
    let (c, s) = (params.cos_sigma(), params.sin_sigma());
    let one_s2 = T::one() + s * s;
    let u = (c * s / one_s2).powi(2) * x;
    Ok(params.eps() * one_s2 * u / ((T::one() + u).sqrt() + T::one()))
}

/// Information profile `f_I(x)` in nats, with `ΔS_AB = Σ p f_I(q²/p²)`.
pub fn f_i<T: Real>(params: &ModelParams<T>, x: T) -> Result<T> {
    check_unit_interval("x", x)?;
    let (c, s) = (params.cos_sigma(), params.sin_sigma());
    let half = T::lit(0.5);
    let y = (c * c + x * s * s).sqrt();
    // 1 − y = s²(1 − x)/(1 + y) and 1 − c = s²/(1 + c), both cancellation-free.
    let lo_y = half * s * s * (T::one() - x) / (T::one() + y);
    let lo_c = half * s * s / (T::one() + c);
    Ok(xlnx(half * (T::one() + y)) + xlnx(lo_y) - xlnx(half * (T::one() + c)) - xlnx(lo_c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Energy,
    Information,
}

/// `f̄ = f / f'(0)`, so that `f̄(x) = x + O(x²)`.
///
/// `f̄_E ≤ x ≤ f̄_I` on `[0, 1]`, which is what makes the entanglement
/// consumption bound hold.
pub fn rescaled_fbar<T: Real>(params: &ModelParams<T>, x: T, which: Profile) -> Result<T> {
    let (c, s) = (params.cos_sigma(), params.sin_sigma());
    match which {
        Profile::Energy => {
            let prefactor = T::lit(2.0) * (T::one() + s * s) / (params.eps() * c * c * s * s);
            Ok(prefactor * f_e(params, x)?)
        }
        Profile::Information => {
            let prefactor = T::lit(4.0) * c / (s * s * log_ratio(params));
            Ok(prefactor * f_i(params, x)?)
        }
    }
}

/// Eigenvalues `λ± = ½[1 ± √(cos²ς + sin²ς q²/p²)]` of B's post-measurement
/// reduced state.
pub fn lambda_pm<T: Real>(params: &ModelParams<T>, p: T, q: T) -> Result<(T, T)> {
    if !(p > T::zero()) {
        return Err(domain("p", p, "(0, 1]"));
    }
    if q.abs() > p * (T::one() + T::epsilon()) {
        return Err(domain("q", q, "[-p, p]"));
    }
    let (c, s) = (params.cos_sigma(), params.sin_sigma());
    let x = ((q / p) * (q / p)).min(T::one());
    let y = (c * c + s * s * x).sqrt();
    let half = T::lit(0.5);
    let minus = half * s * s * (T::one() - x) / (T::one() + y);
    Ok((T::one() - minus, minus))
}

/// `ΔS_AB = Σ p f_I(q²/p²)`, skipping zero-weight outcomes.
pub fn delta_s_closed<T: Real>(params: &ModelParams<T>, weights: &[OutcomeWeights<T>]) -> T {
    weights
        .iter()
        .filter_map(|w| {
            w.correlation_ratio()
                .map(|x| w.p * f_i(params, x).expect("ratio clamped to [0, 1]"))
        })
        .sum()
}

/// Coefficients of the two energy–entanglement inequalities:
///
/// ```text
/// ΔS_AB ≥ c32 · max E_B / ε        max E_B ≥ c770 · ΔS_AB
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCoefficients<T> {
    /// `(1 + sin²ς)/(2cos³ς) · ln((1 + cos ς)/(1 − cos ς))`, dimensionless.
    pub c32: T,
    /// `2ε[√(4 − 3cos²ς) − 2 + cos²ς] / [(1+cos ς)ln(2/(1+cos ς)) + (1−cos ς)ln(2/(1−cos ς))]`,
    /// in energy per nat.
    pub c770: T,
}

impl<T: Real> BoundCoefficients<T> {
    /// Right-hand side of `ΔS ≥ c32 · max E_B / ε`.
    pub fn consumption_bound(&self, params: &ModelParams<T>, max_eb: T) -> T {
        self.c32 * max_eb / params.eps()
    }

    /// Right-hand side of `max E_B ≥ c770 · ΔS`.
    pub fn energy_bound(&self, delta_s: T) -> T {
        self.c770 * delta_s
    }
}

pub fn bounds<T: Real>(params: &ModelParams<T>) -> BoundCoefficients<T> {
    let (c, s) = (params.cos_sigma(), params.sin_sigma());
    let two = T::lit(2.0);
    let c32 = (T::one() + s * s) / (two * c * c * c) * log_ratio(params);

    // √(4 − 3c²) − (2 − c²) = c²s² / (√(1 + 3s²) + 1 + s²)
    let numerator = c * c * s * s / ((T::one() + T::lit(3.0) * s * s).sqrt() + T::one() + s * s);
    let one_minus_c = s * s / (T::one() + c);
    let denominator =
        (T::one() + c) * (two / (T::one() + c)).ln() + one_minus_c * (two / one_minus_c).ln();
    let c770 = two * params.eps() * numerator / denominator;
    BoundCoefficients { c32, c770 }
}
