//! Where a measurement comes from: a POVM JSON file or a builtin.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qet_core::measurement::{load_povm, to_json, MeasurementModel};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum PovmSource {
    File(PathBuf),
    Projective,
    Identity,
    /// Symmetric pair `(½, ±u/2)`.
    Weak(f64),
}

impl FromStr for PovmSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(name) = s.strip_prefix("builtin:") else {
            return Ok(PovmSource::File(PathBuf::from(s)));
        };
        match name {
            "projective" => Ok(PovmSource::Projective),
            "identity" => Ok(PovmSource::Identity),
            _ => {
                let inner = name
                    .strip_prefix("weak(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown builtin measurement '{name}'"))?;
                let u: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| format!("weak(u): '{inner}' is not a number"))?;
                if !(0.0..=1.0).contains(&u) {
                    return Err(format!("weak(u) needs 0 <= u <= 1, got {u}"));
                }
                Ok(PovmSource::Weak(u))
            }
        }
    }
}

impl fmt::Display for PovmSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PovmSource::File(path) => write!(f, "{}", path.display()),
            PovmSource::Projective => f.write_str("builtin:projective"),
            PovmSource::Identity => f.write_str("builtin:identity"),
            PovmSource::Weak(u) => write!(f, "builtin:weak({u})"),
        }
    }
}

impl PovmSource {
    pub fn load(&self) -> Result<MeasurementModel<f64>, CliError> {
        match self {
            PovmSource::File(path) => load_povm(path).map_err(|err| CliError::Io(err.to_string())),
            PovmSource::Projective => Ok(MeasurementModel::projective_x()),
            PovmSource::Identity => Ok(MeasurementModel::identity()),
            PovmSource::Weak(u) => Ok(MeasurementModel::symmetric_pair(*u)?),
        }
    }
}

/// SHA-256 of the canonical JSON form, identifying a measurement in sweep output.
pub fn measurement_hash(model: &MeasurementModel<f64>) -> String {
    hex::encode(Sha256::digest(to_json(model).as_bytes()))
}
