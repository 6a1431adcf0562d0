use std::fs::{self, File};
use std::io::BufWriter;
use std::str::FromStr;

use qet_core::optimizer::OptimizerOptions;
use rayon::prelude::*;

use crate::args::SweepArgs;
use crate::record::{write_csv, RunRecord, COLUMNS};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `MIN:MAX:N[:lin|log]` with `0 < MIN ≤ MAX` and `N ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected MIN:MAX:N[:log], got '{s}'"));
        }
        let real = |text: &str| {
            text.parse::<f64>()
                .map_err(|_| format!("'{text}' is not a number"))
        };
        let (min, max) = (real(parts[0])?, real(parts[1])?);
        let points: usize = parts[2]
            .parse()
            .map_err(|_| format!("'{}' is not a point count", parts[2]))?;
        let spacing = match parts.get(3) {
            None | Some(&"lin") => Spacing::Linear,
            Some(&"log") => Spacing::Log,
            Some(other) => return Err(format!("unknown spacing '{other}' (lin or log)")),
        };
        if !(min > 0.0 && min.is_finite() && max.is_finite()) {
            return Err(format!(
                "range bounds must be positive and finite, got {min}:{max}"
            ));
        }
        if min > max {
            return Err(format!("range minimum {min} exceeds maximum {max}"));
        }
        if points == 0 {
            return Err("a range needs at least one point".into());
        }
        Ok(Self {
            min,
            max,
            points,
            spacing,
        })
    }
}

impl RangeSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }
}

/// Evaluates every grid point in parallel; rows come back h-major.
pub fn sweep_records(args: &SweepArgs) -> Result<Vec<RunRecord>, CliError> {
    let model = args.povm.load()?;
    let opts = OptimizerOptions::default();
    let hs = args.h.values();
    let ks = args.k.values();
    let grid: Vec<(f64, f64)> = hs
        .iter()
        .flat_map(|&h| ks.iter().map(move |&k| (h, k)))
        .collect();
    grid.par_iter()
        .map(|&(h, k)| RunRecord::compute(h, k, &model, &opts))
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let records = sweep_records(args)?;
    let unwritable = |err: std::io::Error| CliError::Io(format!("{}: {err}", args.out.display()));
    fs::create_dir_all(&args.out).map_err(unwritable)?;
    let path = args.out.join("sweep.csv");
    let file = File::create(&path).map_err(unwritable)?;
    write_csv(
        BufWriter::new(file),
        &COLUMNS,
        records.iter().map(RunRecord::fields),
    )?;
    println!("{} rows written to {}", records.len(), path.display());
    Ok(())
}
