//! Entanglement consumed by the measurement, computed from reduced states.
//!
//! `ΔS_AB = S_AB(g) − Σ p S_AB(μ)` uses the entropy of entanglement of the
//! pure post-measurement states. The pointer register `Ā` records μ, and the
//! mutual information of the classical-quantum state
//! `Φ_ĀB = Σ p |μ⟩⟨μ| ⊗ ρ_B(μ)` equals `ΔS_AB`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::measurement::MeasurementModel;
use crate::model::{ground_state, ModelParams};
use crate::qmath::{hermitian_eig, on_a, partial_trace, Operator2, StateVector4, Subsystem};
use crate::scalar::{shannon, Real};

/// Entropies in nats.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport<T> {
    pub s_ground: T,
    /// `S_AB(μ)` per outcome; zero for zero-weight outcomes.
    pub s_post: Vec<T>,
    pub probabilities: Vec<T>,
    pub delta_s: T,
    pub mutual_info: T,
}

/// Von Neumann entropy of a 2×2 density matrix.
///
/// Eigenvalues are clamped to `[0, 1]`; negative round-off below `1e-12`
/// (scaled for `T`) is absorbed.
pub fn von_neumann_entropy<T: Real>(rho: &Operator2<T>) -> Result<T> {
    let eig = hermitian_eig(rho)?;
    Ok(shannon(
        eig.values.iter().map(|&l| l.max(T::zero()).min(T::one())),
    ))
}

/// Entropy of entanglement of a normalized two-qubit pure state.
pub fn entropy_of_entanglement<T: Real>(psi: &StateVector4<T>) -> Result<T> {
    if !psi.is_normalized(T::check_tol()) {
        return Err(Error::NotNormalized {
            norm: psi.norm().as_f64(),
        });
    }
    von_neumann_entropy(&partial_trace(&psi.projector(), Subsystem::B))
}

/// Pointer-system state: blocks `p_μ ρ_B(μ)` of `Φ_ĀB`.
#[derive(Clone, Debug)]
pub struct PointerState<T> {
    pub blocks: Vec<(T, Option<Operator2<T>>)>,
}

impl<T: Real> PointerState<T> {
    /// `ρ_B(μ) = Tr_A[Π(μ)|g⟩⟨g|] / p(μ)` for every outcome.
    pub fn new(params: &ModelParams<T>, model: &MeasurementModel<T>) -> Self {
        let g = ground_state(params).psi.projector();
        let blocks = model
            .outcomes()
            .iter()
            .map(|o| {
                let unnormalized =
                    partial_trace(&(on_a(&o.weights.povm_element()) * g), Subsystem::B);
                let p = unnormalized.trace().re;
                let rho = (p >= T::zero_weight()).then(|| {
                    // Tr_A[Π ρ] is Hermitian only up to round-off.
                    let r = unnormalized.scale(p.recip());
                    (r + r.adjoint()).scale(T::lit(0.5))
                });
                (p, rho)
            })
            .collect();
        Self { blocks }
    }

    /// `Φ_B = Σ p ρ_B(μ)`.
    pub fn marginal_b(&self) -> Operator2<T> {
        self.blocks
            .iter()
            .filter_map(|(p, rho)| rho.map(|r| r.scale(*p)))
            .fold(Operator2::zeros(), |a, b| a + b)
    }

    /// `S(Φ_Ā) = H(p)`.
    pub fn entropy_pointer(&self) -> T {
        shannon(self.blocks.iter().map(|(p, _)| *p))
    }

    pub fn entropy_b(&self) -> Result<T> {
        von_neumann_entropy(&self.marginal_b())
    }

    /// `S(Φ_ĀB) = H(p) + Σ p S(ρ_B(μ))` from the block-diagonal structure.
    pub fn entropy_joint(&self) -> Result<T> {
        let mut conditional = T::zero();
        for (p, rho) in &self.blocks {
            if let Some(r) = rho {
                conditional += *p * von_neumann_entropy(r)?;
            }
        }
        Ok(self.entropy_pointer() + conditional)
    }

    pub fn mutual_information(&self) -> Result<T> {
        Ok(self.entropy_pointer() + self.entropy_b()? - self.entropy_joint()?)
    }

    /// Dense `2n × 2n` matrix of `Φ_ĀB`, pointer index major.
    pub fn dense(&self) -> Vec<Vec<Complex<T>>> {
        let n = 2 * self.blocks.len();
        let mut out = vec![vec![Complex::zero(); n]; n];
        for (mu, (p, rho)) in self.blocks.iter().enumerate() {
            if let Some(r) = rho {
                for i in 0..2 {
                    for j in 0..2 {
                        out[2 * mu + i][2 * mu + j] = r[(i, j)] * *p;
                    }
                }
            }
        }
        out
    }
}

pub fn mutual_information<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
) -> Result<T> {
    PointerState::new(params, model).mutual_information()
}

/// Reduced states `ρ_B(μ)` obtained by measuring and tracing out A;
/// `None` for zero-weight outcomes.
pub fn post_measurement_reduced<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
) -> Vec<(T, Option<Operator2<T>>)> {
    model
        .measure(&ground_state(params))
        .into_iter()
        .map(|o| {
            let rho = o
                .state()
                .ok()
                .map(|s| partial_trace(&s.projector(), Subsystem::B));
            (o.probability, rho)
        })
        .collect()
}

/// Brute-force entanglement consumption and pointer mutual information.
pub fn consumption<T: Real>(
    params: &ModelParams<T>,
    model: &MeasurementModel<T>,
) -> Result<EntanglementReport<T>> {
    let s_ground = entropy_of_entanglement(&ground_state(params).psi)?;
    let mut s_post = Vec::with_capacity(model.len());
    let mut probabilities = Vec::with_capacity(model.len());
    for (p, rho) in post_measurement_reduced(params, model) {
        s_post.push(match rho {
            Some(r) => von_neumann_entropy(&r)?,
            None => T::zero(),
        });
        probabilities.push(p);
    }
    let averaged: T = probabilities
        .iter()
        .zip(&s_post)
        .filter(|(p, _)| **p >= T::zero_weight())
        .map(|(p, s)| *p * *s)
        .sum();
    Ok(EntanglementReport {
        s_ground,
        delta_s: s_ground - averaged,
        mutual_info: mutual_information(params, model)?,
        s_post,
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{delta_s_closed, lambda_pm};
    use crate::measurement::{random_kraus_measurement, OutcomeWeights};

    const S_GROUND_UNIT: f64 = 0.416_495_530_699_687_5;
    const DELTA_S_QUARTER_UNIT: f64 = 0.081_173_837_278_368_57;

    fn unit() -> ModelParams<f64> {
        ModelParams::<f64>::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn product_and_bell_states() {
        assert_eq!(
            entropy_of_entanglement(&StateVector4::<f64>::basis(0)).unwrap(),
            0.0
        );
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector4::from_real([r, 0.0, 0.0, r]);
        assert!((entropy_of_entanglement(&bell).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(matches!(
            entropy_of_entanglement(&StateVector4::<f64>::from_real([1.0, 1.0, 0.0, 0.0])),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn ground_state_entropy() {
        let s = entropy_of_entanglement(&ground_state(&unit()).psi).unwrap();
        assert!((s - S_GROUND_UNIT).abs() < 1e-14);
    }

    #[test]
    fn identity_consumes_nothing() {
        let r = consumption(&unit(), &MeasurementModel::identity()).unwrap();
        assert!(r.delta_s.abs() < 1e-14);
        assert!(r.mutual_info.abs() < 1e-14);
    }

    #[test]
    fn projective_consumes_everything() {
        let r = consumption(&unit(), &MeasurementModel::projective_x()).unwrap();
        assert!(r.s_post.iter().all(|s| s.abs() < 1e-12));
        assert!((r.delta_s - r.s_ground).abs() < 1e-12);
        assert!((r.mutual_info - S_GROUND_UNIT).abs() < 1e-12);
    }

    #[test]
    fn quarter_pair() {
        let m = MeasurementModel::from_weights(&[
            OutcomeWeights::<f64>::new(0.5, 0.25),
            OutcomeWeights::<f64>::new(0.5, -0.25),
        ])
        .unwrap();
        let r = consumption(&unit(), &m).unwrap();
        assert!((r.delta_s - DELTA_S_QUARTER_UNIT).abs() < 1e-12);
        assert!((r.mutual_info - r.delta_s).abs() < 1e-12);
    }

    #[test]
    fn closed_form_and_eigenvalue_agreement() {
        for seed in 0..200 {
            let p = ModelParams::<f64>::new(0.3 + 0.01 * seed as f64, 1.7 - 0.005 * seed as f64)
                .unwrap();
            let m = random_kraus_measurement::<f64>(seed, 2 + (seed % 4) as usize).unwrap();
            let r = consumption(&p, &m).unwrap();
            assert!((r.delta_s - delta_s_closed(&p, &m.weights())).abs() <= 1e-10);
            assert!((r.mutual_info - r.delta_s).abs() <= 1e-10);
            assert!(r.delta_s >= -1e-12);
            for ((prob, rho), w) in post_measurement_reduced(&p, &m)
                .into_iter()
                .zip(m.weights())
            {
                let Some(rho) = rho else { continue };
                let eig = hermitian_eig(&rho).unwrap();
                let (hi, lo) = lambda_pm(&p, w.p, w.q).unwrap();
                assert!((eig.values[0] - lo).abs() <= 1e-10 && (eig.values[1] - hi).abs() <= 1e-10);
                assert!((prob - w.p).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn pointer_marginal_is_ground_reduced_state() {
        let p = ModelParams::<f64>::new(0.9, 1.3).unwrap();
        let m = random_kraus_measurement::<f64>(17, 4).unwrap();
        let pointer = PointerState::new(&p, &m);
        let rho_b = partial_trace(&ground_state(&p).psi.projector(), Subsystem::B);
        assert!((pointer.marginal_b() - rho_b).max_abs() < 1e-14);
    }

    #[test]
    fn delta_s_monotone_in_correlation() {
        let p = ModelParams::<f64>::new(1.2, 0.8).unwrap();
        let mut prev = -1.0;
        for i in 0..64 {
            let u = i as f64 / 63.0;
            let m = MeasurementModel::symmetric_pair(u).unwrap();
            let d = consumption(&p, &m).unwrap().delta_s;
            assert!(d >= prev - 1e-14);
            prev = d;
        }
    }
}
