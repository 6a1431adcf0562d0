//! The `verify` property suite.
//!
//! Every check reports the largest residual it saw against its tolerance.
//! Reductions are maxima, so parallel evaluation gives identical verdicts
//! run to run.

use std::f64::consts::PI;

use qet_core::analytic::{
    bounds, delta_s_closed, lambda_pm, max_eb_closed, max_eb_projective, rescaled_fbar, Profile,
};
use qet_core::entanglement::{consumption, entropy_of_entanglement, post_measurement_reduced};
use qet_core::measurement::{random_kraus_measurement, MeasurementModel, OutcomeWeights};
use qet_core::model::{build_hamiltonian, ground_state, ModelParams};
use qet_core::optimizer::{maximize_over_policy, OptimizerOptions};
use qet_core::protocol::{
    input_energy, optimal_policy, passive_unitary_energy, run, LocalUnitary, TimeEvolution,
};
use qet_core::qmath::{hermitian_eig, Expectation};
use rayon::prelude::*;
use serde_json::json;

use crate::args::VerifyArgs;
use crate::CliError;

const MAX_EB_UNIT: f64 = 0.114_747_633_940_147_12;
const S_GROUND_UNIT: f64 = 0.416_495_530_699_687_5;
const C32_UNIT: f64 = 3.739_351_440_841_383;
const C770_UNIT: f64 = 0.275_507_479_629_800_6;

/// Ensemble members sent through the policy optimizer; it is the slow check.
const OPTIMIZER_SAMPLE: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    pub message: Option<String>,
}

fn measured(name: &'static str, residual: f64, tolerance: f64) -> CheckResult {
    let status = if residual <= tolerance {
        Status::Pass
    } else {
        Status::Fail
    };
    CheckResult {
        name,
        status,
        residual,
        tolerance,
        message: None,
    }
}

fn skipped(name: &'static str, tolerance: f64) -> CheckResult {
    CheckResult {
        name,
        status: Status::Skipped,
        residual: 0.0,
        tolerance,
        message: None,
    }
}

fn pairs() -> Vec<ModelParams<f64>> {
    let values = [0.3, 1.0, 3.0];
    values
        .iter()
        .flat_map(|&h| values.iter().map(move |&k| ModelParams::new(h, k).unwrap()))
        .collect()
}

fn unit() -> ModelParams<f64> {
    ModelParams::new(1.0, 1.0).unwrap()
}

fn max3(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64, f64) {
    (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2))
}

/// Builtins must pass validation; the corrupt one exists only to exercise the failure path.
fn check_builtins(corrupt: bool) -> CheckResult {
    let mut candidates = vec![
        MeasurementModel::from_weights(&[
            OutcomeWeights::new(0.5, 0.5),
            OutcomeWeights::new(0.5, -0.5),
        ]),
        MeasurementModel::from_weights(&[OutcomeWeights::new(1.0, 0.0)]),
        MeasurementModel::symmetric_pair(0.1),
    ];
    if corrupt {
        candidates.push(MeasurementModel::from_weights(&[
            OutcomeWeights::new(0.45, 0.1),
            OutcomeWeights::new(0.45, -0.1),
        ]));
    }
    match candidates.into_iter().find_map(Result::err) {
        None => measured("builtin_measurements", 0.0, 0.0),
        Some(err) => CheckResult {
            name: "builtin_measurements",
            status: Status::Fail,
            residual: f64::INFINITY,
            tolerance: 0.0,
            message: Some(err.to_string()),
        },
    }
}

fn check_ground_state() -> CheckResult {
    let grid: Vec<f64> = (0..20)
        .map(|i| 10f64.powf(-1.0 + 2.0 * i as f64 / 19.0))
        .collect();
    let worst = grid
        .par_iter()
        .flat_map_iter(|&h| grid.iter().map(move |&k| (h, k)))
        .map(|(h, k)| {
            let p = ModelParams::new(h, k).unwrap();
            let parts = build_hamiltonian(&p);
            let g = ground_state(&p).psi;
            let e = parts.energies(&g);
            let e0 = hermitian_eig(&parts.h)
                .map(|s| s.values[0].abs())
                .unwrap_or(f64::INFINITY);
            [
                (parts.h * g).norm(),
                e.h_a.abs(),
                e.h_b.abs(),
                e.v.abs(),
                e0,
            ]
            .into_iter()
            .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    measured("ground_state", worst, 1e-9)
}

fn check_anchors() -> CheckResult {
    let p = unit();
    let m = MeasurementModel::projective_x();
    let report = run(&p, &m, &optimal_policy(&p, &m));
    let s_ground = entropy_of_entanglement(&ground_state(&p).psi);
    let (Ok(report), Ok(s_ground)) = (report, s_ground) else {
        return CheckResult {
            name: "unit_anchor_values",
            status: Status::Fail,
            residual: f64::INFINITY,
            tolerance: 1e-9,
            message: Some("protocol run failed".into()),
        };
    };
    let b = bounds(&p);
    let worst = [
        max_eb_projective(&p) - MAX_EB_UNIT,
        report.teleported_energy - MAX_EB_UNIT,
        s_ground - S_GROUND_UNIT,
        report.delta_s - S_GROUND_UNIT,
        b.c32 - C32_UNIT,
        b.c770 - C770_UNIT,
        report.input_energy - std::f64::consts::FRAC_1_SQRT_2,
    ]
    .into_iter()
    .fold(0.0, |a: f64, d| a.max(d.abs()));
    measured("unit_anchor_values", worst, 1e-9)
}

fn check_evolution() -> CheckResult {
    let models = [
        MeasurementModel::projective_x(),
        MeasurementModel::symmetric_pair(0.3).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for p in pairs() {
        for m in &models {
            let Ok(evolution) = TimeEvolution::new(&p, m) else {
                return measured("time_evolution", f64::INFINITY, 1e-9);
            };
            let t_max = PI / (2.0 * p.k());
            for i in 0..256 {
                let s = evolution.at(t_max * i as f64 / 255.0);
                worst = worst
                    .max((s.hb_bruteforce - s.hb_closed).abs())
                    .max(s.v_expect.abs());
            }
            let peak = evolution.at(PI / (4.0 * p.k())).hb_bruteforce;
            worst = worst.max((peak - input_energy(&p, m)).abs());
        }
    }
    measured("time_evolution", worst, 1e-9)
}

fn check_profiles() -> CheckResult {
    let mut worst: f64 = 0.0;
    for p in pairs() {
        for i in 0..1024 {
            let x = i as f64 / 1023.0;
            let (Ok(e), Ok(inf)) = (
                rescaled_fbar(&p, x, Profile::Energy),
                rescaled_fbar(&p, x, Profile::Information),
            ) else {
                return measured("profile_bracket", f64::INFINITY, 1e-12);
            };
            worst = worst.max(e - x).max(x - inf);
        }
    }
    measured("profile_bracket", worst, 1e-12)
}

struct Ensemble {
    members: Vec<(ModelParams<f64>, MeasurementModel<f64>)>,
    seed: u64,
}

impl Ensemble {
    fn new(seed: u64, size: usize) -> Result<Self, CliError> {
        let pairs = pairs();
        let base = seed.wrapping_mul(0x2545_f491_4f6c_dd1d);
        let members = (0..size)
            .map(|i| {
                let model = random_kraus_measurement(base.wrapping_add(i as u64), 2 + i % 4)?;
                Ok((pairs[i % pairs.len()], model))
            })
            .collect::<Result<_, qet_core::Error>>()?;
        Ok(Self { members, seed })
    }

    fn checks(&self) -> Vec<CheckResult> {
        let (energy, local, _) = self
            .members
            .par_iter()
            .map(|(p, m)| {
                let parts = build_hamiltonian(p);
                let (mut hb, mut v) = (0.0, 0.0);
                for branch in m.branches(&ground_state(p).psi) {
                    hb += branch.raw_expectation(&parts.h_b).re;
                    v += branch.raw_expectation(&parts.v).re;
                }
                (
                    (input_energy(p, m) - m.input_energy_closed(p)).abs(),
                    hb.abs().max(v.abs()),
                    0.0,
                )
            })
            .reduce(|| (0.0, 0.0, 0.0), max3);

        let (ds, lambda, mi) = self
            .members
            .par_iter()
            .map(|(p, m)| {
                let Ok(r) = consumption(p, m) else {
                    return (f64::INFINITY, f64::INFINITY, f64::INFINITY);
                };
                let mut lambda: f64 = 0.0;
                for ((_, rho), w) in post_measurement_reduced(p, m).into_iter().zip(m.weights()) {
                    let Some(rho) = rho else { continue };
                    match (hermitian_eig(&rho), lambda_pm(p, w.p, w.q)) {
                        (Ok(eig), Ok((hi, lo))) => {
                            lambda = lambda
                                .max((eig.values[0] - lo).abs())
                                .max((eig.values[1] - hi).abs());
                        }
                        _ => lambda = f64::INFINITY,
                    }
                }
                (
                    (r.delta_s - delta_s_closed(p, &m.weights())).abs(),
                    lambda,
                    (r.mutual_info - r.delta_s).abs(),
                )
            })
            .reduce(|| (0.0, 0.0, 0.0), max3);

        let (b32, b770, eb) = self
            .members
            .par_iter()
            .map(|(p, m)| match run(p, m, &optimal_policy(p, m)) {
                Ok(r) => (
                    (-r.slack32()).max(0.0),
                    (-r.slack770()).max(0.0),
                    (r.teleported_energy - r.max_teleported_energy).abs(),
                ),
                Err(_) => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
            })
            .reduce(|| (0.0, 0.0, 0.0), max3);

        let (passive, forms, _) = self
            .members
            .par_iter()
            .enumerate()
            .map(|(i, (p, m))| {
                // Deterministic pseudo-random unitary per member.
                let t = (self.seed as f64 + 1.0) * 0.618_033_988_749_895
                    + i as f64 * 0.754_877_666_246_693;
                let z = 2.0 * (t * 1.3).fract() - 1.0;
                let phi = 2.0 * PI * (t * 2.7).fract();
                let r = (1.0 - z * z).sqrt();
                let w = LocalUnitary::new(2.0 * PI * t.fract(), [r * phi.cos(), r * phi.sin(), z]);
                match w.map(|w| passive_unitary_energy(p, m, &w)) {
                    Ok(Ok(e)) => (
                        (-e.difference).max(0.0),
                        (e.difference - e.local_form)
                            .abs()
                            .max((e.local_form - e.total_form).abs()),
                        0.0,
                    ),
                    _ => (f64::INFINITY, f64::INFINITY, 0.0),
                }
            })
            .reduce(|| (0.0, 0.0, 0.0), max3);

        let opts = OptimizerOptions::default();
        let optimizer = self.members[..self.members.len().min(OPTIMIZER_SAMPLE)]
            .par_iter()
            .map(|(p, m)| {
                let closed = max_eb_closed(p, &m.weights());
                let numeric = maximize_over_policy(p, m, &opts).best_value;
                (numeric - closed).abs() / closed.abs().max(f64::MIN_POSITIVE)
            })
            .reduce(|| 0.0, f64::max);

        vec![
            measured("input_energy_oracle", energy, 1e-10),
            measured("post_measurement_local_energy", local, 1e-10),
            measured("consumption_oracle", ds, 1e-10),
            measured("reduced_state_spectrum", lambda, 1e-10),
            measured("mutual_information_identity", mi, 1e-10),
            measured("optimal_policy_attains_maximum", eb, 1e-10),
            measured("consumption_bound", b32, 1e-10),
            measured("energy_bound", b770, 1e-10),
            measured("passive_unitary_no_go", passive, 1e-10),
            measured("passive_energy_forms", forms, 1e-10),
            measured("optimizer_vs_closed_form", optimizer, 1e-7),
        ]
    }
}

const ENSEMBLE_CHECKS: [(&str, f64); 11] = [
    ("input_energy_oracle", 1e-10),
    ("post_measurement_local_energy", 1e-10),
    ("consumption_oracle", 1e-10),
    ("reduced_state_spectrum", 1e-10),
    ("mutual_information_identity", 1e-10),
    ("optimal_policy_attains_maximum", 1e-10),
    ("consumption_bound", 1e-10),
    ("energy_bound", 1e-10),
    ("passive_unitary_no_go", 1e-10),
    ("passive_energy_forms", 1e-10),
    ("optimizer_vs_closed_form", 1e-7),
];

pub fn run_suite(args: &VerifyArgs) -> Result<Vec<CheckResult>, CliError> {
    let mut results = vec![
        check_builtins(args.corrupt_builtin),
        check_ground_state(),
        check_anchors(),
        check_evolution(),
        check_profiles(),
    ];
    if args.ensemble == 0 {
        results.extend(
            ENSEMBLE_CHECKS
                .iter()
                .map(|&(name, tol)| skipped(name, tol)),
        );
    } else {
        results.extend(Ensemble::new(args.seed, args.ensemble)?.checks());
    }
    Ok(results)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let results = run_suite(args)?;
    for r in &results {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        println!(
            "{:<32} {:<8} max residual {:.3e} (tol {:.0e})",
            r.name, status, r.residual, r.tolerance
        );
    }
    let failures: Vec<_> = results
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| {
            json!({
                "check": r.name,
                "residual": if r.residual.is_finite() { json!(r.residual) } else { json!(null) },
                "tolerance": r.tolerance,
                "message": r.message,
            })
        })
        .collect();
    println!(
        "seed {} ensemble {}: {} checks, {} failed",
        args.seed,
        args.ensemble,
        results.len(),
        failures.len()
    );
    if failures.is_empty() {
        return Ok(());
    }
    eprintln!(
        "{}",
        json!({ "seed": args.seed, "ensemble": args.ensemble, "failures": failures })
    );
    Err(CliError::Verification)
}
