use std::fs::File;
use std::io::{self, BufWriter, Write};

use qet_core::analytic::{bounds, delta_s_closed, max_eb_projective};
use qet_core::measurement::MeasurementModel;
use qet_core::model::ModelParams;
use qet_core::optimizer::{maximize_over_policy, maximize_over_weights, OptimizerOptions};
use qet_core::protocol::{optimal_policy, run, FeedbackPolicy, TimeEvolution};
use serde_json::{json, Value};

use crate::args::{EvolveArgs, OptimizeArgs, Over, ReportArgs};
use crate::record::{fmt_real, write_csv};
use crate::source::measurement_hash;
use crate::CliError;

fn policy_json(policy: &FeedbackPolicy<f64>) -> Value {
    policy
        .unitaries()
        .iter()
        .map(|u| json!({ "omega": u.omega, "axis": u.axis }))
        .collect()
}

fn measurement_json(source: &str, model: &MeasurementModel<f64>) -> Value {
    json!({
        "source": source,
        "sha256": measurement_hash(model),
        "weights": model.weights().iter().map(|w| json!({ "p": w.p, "q": w.q })).collect::<Vec<_>>(),
    })
}

fn print_json(value: &Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Io(e.to_string()))
}

/// Report for one `(h, k, measurement)` with the optimal policy.
pub fn report_json(
    params: &ModelParams<f64>,
    source: &str,
    model: &MeasurementModel<f64>,
) -> Result<Value, CliError> {
    let policy = optimal_policy(params, model);
    let r = run(params, model, &policy)?;
    let b = bounds(params);
    let per_outcome: Vec<Value> = r
        .per_outcome
        .iter()
        .zip(model.weights())
        .map(|(o, w)| {
            json!({
                "p": w.p,
                "q": w.q,
                "probability": o.probability,
                "h_a": o.energies.h_a,
                "h_b": o.energies.h_b,
                "v": o.energies.v,
            })
        })
        .collect();
    Ok(json!({
        "params": { "h": params.h(), "k": params.k(), "eps": params.eps() },
        "measurement": measurement_json(source, model),
        "policy": policy_json(&policy),
        "input_energy": { "closed": r.input_energy_closed, "bruteforce": r.input_energy },
        "teleported_energy": {
            "closed": r.teleported_energy_closed,
            "bruteforce": r.teleported_energy,
            "max_closed": r.max_teleported_energy,
        },
        "total_final_energy": r.total_final_energy,
        "delta_s": { "closed": delta_s_closed(params, &model.weights()), "bruteforce": r.delta_s },
        "mutual_info": r.mutual_info,
        "bound32": { "c32": b.c32, "lhs": r.bound32_lhs, "rhs": r.bound32_rhs, "slack": r.slack32() },
        "bound770": { "c770": b.c770, "lhs": r.bound770_lhs, "rhs": r.bound770_rhs, "slack": r.slack770() },
        "per_outcome": per_outcome,
    }))
}

pub fn cmd_report(args: &ReportArgs) -> Result<(), CliError> {
    let params = ModelParams::new(args.h, args.k)?;
    let model = args.povm.load()?;
    print_json(&report_json(&params, &args.povm.to_string(), &model)?)
}

pub const EVOLVE_COLUMNS: [&str; 4] = ["t", "HB_bruteforce", "HB_closed", "V_expect"];

pub fn evolve_rows(
    params: &ModelParams<f64>,
    model: &MeasurementModel<f64>,
    t_max: f64,
    points: usize,
) -> Result<Vec<[f64; 4]>, CliError> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "--t-max must be positive, got {t_max}"
        )));
    }
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let evolution = TimeEvolution::new(params, model)?;
    let last = points.saturating_sub(1).max(1) as f64;
    Ok((0..points)
        .map(|i| {
            let s = evolution.at(t_max * i as f64 / last);
            [s.t, s.hb_bruteforce, s.hb_closed, s.v_expect]
        })
        .collect())
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<(), CliError> {
    let params = ModelParams::new(args.h, args.k)?;
    let model = args.povm.load()?;
    let rows = evolve_rows(&params, &model, args.t_max, args.points)?;
    let records = rows
        .iter()
        .map(|r| r.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>());
    match &args.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_csv(BufWriter::new(file), &EVOLVE_COLUMNS, records)
        }
        None => write_csv(io::stdout().lock(), &EVOLVE_COLUMNS, records),
    }
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<(), CliError> {
    let params = ModelParams::new(args.h, args.k)?;
    let model = args.povm.load()?;
    let opts = OptimizerOptions {
        seed: args.seed,
        ..OptimizerOptions::default()
    };
    let value = match args.over {
        Over::Policy => {
            let r = maximize_over_policy(&params, &model, &opts);
            json!({
                "over": "policy",
                "measurement": measurement_json(&args.povm.to_string(), &model),
                "best_value": r.best_value,
                "closed_form": run(&params, &model, &optimal_policy(&params, &model))?.max_teleported_energy,
                "evaluations": r.evaluations,
                "converged": r.converged,
                "policy": policy_json(&r.best_policy),
            })
        }
        Over::Weights => {
            let r = maximize_over_weights(&params, model.len(), &opts)?;
            json!({
                "over": "weights",
                "n_outcomes": model.len(),
                "best_value": r.value,
                "projective_closed_form": max_eb_projective(&params),
                "evaluations": r.evaluations,
                "converged": r.converged,
                "weights": r.weights.iter().map(|w| json!({ "p": w.p, "q": w.q })).collect::<Vec<_>>(),
            })
        }
    };
    print_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evolution_endpoints() {
        let p = ModelParams::new(1.0, 1.0).unwrap();
        let rows = evolve_rows(
            &p,
            &MeasurementModel::projective_x(),
            std::f64::consts::FRAC_PI_2,
            257,
        )
        .unwrap();
        assert_eq!(rows[0], [0.0, rows[0][1], 0.0, rows[0][3]]);
        assert!(rows[0][1].abs() < 1e-14);
        assert!((rows[128][1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(evolve_rows(&p, &MeasurementModel::projective_x(), 0.0, 10).is_err());
        assert!(evolve_rows(&p, &MeasurementModel::projective_x(), 1.0, 0).is_err());
    }

    #[test]
    fn identity_report_is_all_zero() {
        let p = ModelParams::new(1.0, 1.0).unwrap();
        let r = report_json(&p, "builtin:identity", &MeasurementModel::identity()).unwrap();
        for path in [
            "/input_energy/bruteforce",
            "/teleported_energy/bruteforce",
            "/delta_s/bruteforce",
            "/mutual_info",
        ] {
            assert!(
                r.pointer(path).unwrap().as_f64().unwrap().abs() < 1e-14,
                "{path}"
            );
        }
    }
}
