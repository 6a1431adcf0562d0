use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use proptest::prelude::*;

use qet_core::analytic::{bounds, max_eb_closed};
use qet_core::entanglement::{consumption, PointerState};
use qet_core::measurement::{random_kraus_measurement, MeasurementModel};
use qet_core::model::{build_hamiltonian, ground_state, ModelParams};
use qet_core::protocol::{optimal_policy, run, FeedbackPolicy, LocalUnitary};
use qet_core::qmath::{hermitian_eig, Expectation, Operator2, Operator4};
use qet_core::scalar::xlnx;

fn params() -> impl Strategy<Value = ModelParams<f64>> {
    (-2.3f64..2.3, -2.3f64..2.3).prop_map(|(a, b)| ModelParams::new(a.exp(), b.exp()).unwrap())
}

fn model() -> impl Strategy<Value = MeasurementModel<f64>> {
    (any::<u64>(), 2usize..6).prop_map(|(seed, n)| random_kraus_measurement(seed, n).unwrap())
}

fn hermitian() -> impl Strategy<Value = Operator4<f64>> {
    prop::array::uniform16(-3.0f64..3.0).prop_map(|raw| {
        let a = Operator4::from_fn(|i, j| Complex64::new(raw[4 * i + j], raw[4 * j + i]));
        (a + a.adjoint()).scale(0.5)
    })
}

fn unitary() -> impl Strategy<Value = LocalUnitary<f64>> {
    (-4.0f64..4.0, -1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(omega, z, phi)| {
        let r = (1.0 - z * z).sqrt();
        LocalUnitary::new(omega, [r * phi.cos(), r * phi.sin(), z]).unwrap()
    })
}

fn entropy_dense(m: DMatrix<Complex64>) -> f64 {
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&l| -xlnx(l.clamp(0.0, 1.0)))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigenvalues_match_nalgebra(a in hermitian()) {
        let ours = hermitian_eig(&a).unwrap();
        let mut theirs: Vec<f64> = Matrix4::from_fn(|i, j| a[(i, j)]).symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in ours.values.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
        prop_assert!((ours.reconstruct() - a).max_abs() <= 1e-12);
    }

    #[test]
    fn ground_state_is_zero_energy(p in params()) {
        let parts = build_hamiltonian(&p);
        let g = ground_state(&p).psi;
        prop_assert!((parts.h * g).norm() <= 1e-12 * (1.0 + p.eps()));
        prop_assert!(hermitian_eig(&parts.h).unwrap().values[0].abs() <= 1e-12 * (1.0 + p.eps()));
    }

    #[test]
    fn kraus_operators_are_complete(m in model()) {
        let sum = (0..m.len())
            .map(|i| { let k = m.kraus_a(i).unwrap(); k.adjoint() * k })
            .fold(Operator2::zeros(), |a, b| a + b);
        prop_assert!((sum - Operator2::identity()).max_abs() <= 1e-12);
    }

    #[test]
    fn block_entropy_matches_dense(p in params(), m in model()) {
        let pointer = PointerState::new(&p, &m);
        let dense = pointer.dense();
        let n = dense.len();
        let joint = entropy_dense(DMatrix::from_fn(n, n, |i, j| dense[i][j]));
        prop_assert!((joint - pointer.entropy_joint().unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn consumption_is_mutual_information(p in params(), m in model()) {
        let r = consumption(&p, &m).unwrap();
        prop_assert!(r.delta_s >= -1e-12);
        prop_assert!((r.delta_s - r.mutual_info).abs() <= 1e-10);
    }

    #[test]
    fn closed_maximum_dominates_any_policy(p in params(), m in model(), us in prop::collection::vec(unitary(), 5)) {
        let policy = FeedbackPolicy::new(us[..m.len()].to_vec());
        let r = run(&p, &m, &policy).unwrap();
        prop_assert!(r.teleported_energy <= max_eb_closed(&p, &m.weights()) + 1e-12);
        prop_assert!(r.input_energy >= -1e-12);
        prop_assert!(r.total_final_energy >= -1e-12);
    }

    #[test]
    fn optimal_policy_attains_maximum(p in params(), m in model()) {
        let r = run(&p, &m, &optimal_policy(&p, &m)).unwrap();
        prop_assert!((r.teleported_energy - r.max_teleported_energy).abs() <= 1e-12 * (1.0 + p.eps()));
        prop_assert!(r.slack32() >= -1e-10);
        prop_assert!(r.slack770() >= -1e-10);
    }

    #[test]
    fn phases_do_not_change_energies(p in params(), m in model(), deltas in prop::collection::vec(-3.0f64..3.0, 5)) {
        let shifted = m.with_deltas(&deltas[..m.len()]).unwrap();
        let a = run(&p, &m, &optimal_policy(&p, &m)).unwrap();
        let b = run(&p, &shifted, &optimal_policy(&p, &shifted)).unwrap();
        prop_assert!((a.teleported_energy - b.teleported_energy).abs() <= 1e-12);
        prop_assert!((a.input_energy - b.input_energy).abs() <= 1e-12);
    }

    #[test]
    fn bound_coefficients_are_positive(p in params()) {
        let b = bounds(&p);
        prop_assert!(b.c32 > 0.0 && b.c770 > 0.0 && b.c32.is_finite() && b.c770.is_finite());
        let g = ground_state(&p).psi;
        prop_assert!(g.raw_expectation(&build_hamiltonian(&p).h).re.abs() <= 1e-12 * (1.0 + p.eps()));
    }
}
