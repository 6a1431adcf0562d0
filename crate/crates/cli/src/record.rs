//! Flattened per-point records and their CSV form.

use std::io::Write;

use qet_core::measurement::MeasurementModel;
use qet_core::model::ModelParams;
use qet_core::optimizer::{maximize_over_policy, OptimizerOptions};
use qet_core::protocol::{optimal_policy, run};

use crate::source::measurement_hash;
use crate::CliError;

/// One protocol run at a grid point, with the optimal policy.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub h: f64,
    pub k: f64,
    pub input_energy: f64,
    pub max_eb_closed: f64,
    pub max_eb_numeric: f64,
    pub delta_s: f64,
    pub mutual_info: f64,
    pub bound32_lhs: f64,
    pub bound32_rhs: f64,
    pub bound770_lhs: f64,
    pub bound770_rhs: f64,
    pub input_energy_closed: f64,
    pub teleported_energy: f64,
    pub total_final_energy: f64,
    pub numeric_converged: bool,
    pub measurement_sha256: String,
}

pub const COLUMNS: [&str; 18] = [
    "h",
    "k",
    "E_A",
    "maxE_B_closed",
    "maxE_B_numeric",
    "delta_S",
    "mutual_info",
    "bound32_lhs",
    "bound32_rhs",
    "bound770_lhs",
    "bound770_rhs",
    "E_A_closed",
    "E_B_bruteforce",
    "total_final_energy",
    "slack32",
    "slack770",
    "numeric_converged",
    "measurement_sha256",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl RunRecord {
    pub fn compute(
        h: f64,
        k: f64,
        model: &MeasurementModel<f64>,
        opts: &OptimizerOptions,
    ) -> Result<Self, CliError> {
        let params = ModelParams::new(h, k)?;
        let report = run(&params, model, &optimal_policy(&params, model))?;
        let numeric = maximize_over_policy(&params, model, opts);
        Ok(Self {
            h,
            k,
            input_energy: report.input_energy,
            max_eb_closed: report.max_teleported_energy,
            max_eb_numeric: numeric.best_value,
            delta_s: report.delta_s,
            mutual_info: report.mutual_info,
            bound32_lhs: report.bound32_lhs,
            bound32_rhs: report.bound32_rhs,
            bound770_lhs: report.bound770_lhs,
            bound770_rhs: report.bound770_rhs,
            input_energy_closed: report.input_energy_closed,
            teleported_energy: report.teleported_energy,
            total_final_energy: report.total_final_energy,
            numeric_converged: numeric.converged,
            measurement_sha256: measurement_hash(model),
        })
    }

    pub fn fields(&self) -> Vec<String> {
        let reals = [
            self.h,
            self.k,
            self.input_energy,
            self.max_eb_closed,
            self.max_eb_numeric,
            self.delta_s,
            self.mutual_info,
            self.bound32_lhs,
            self.bound32_rhs,
            self.bound770_lhs,
            self.bound770_rhs,
            self.input_energy_closed,
            self.teleported_energy,
            self.total_final_energy,
            self.bound32_lhs - self.bound32_rhs,
            self.bound770_lhs - self.bound770_rhs,
        ];
        let mut out: Vec<String> = reals.iter().map(|&x| fmt_real(x)).collect();
        out.push(self.numeric_converged.to_string());
        out.push(self.measurement_sha256.clone());
        out
    }
}

/// Writes a header row and one row per record.
pub fn write_csv<W: Write>(
    sink: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let io = |err: csv::Error| CliError::Io(err.to_string());
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(header).map_err(io)?;
    for row in rows {
        writer.write_record(&row).map_err(io)?;
    }
    writer.flush().map_err(|err| CliError::Io(err.to_string()))
}
