//! JSON description of a measurement.
//!
//! ```json
//! {"outcomes": [{"m": 0.5, "l": 0.5, "alpha": 0.0, "delta": 0.0}, ...]}
//! {"weights":  [{"p": 0.5, "q": 0.5}, ...]}
//! ```
//!
//! Exactly one of the two keys must be present. `alpha` and `delta` default
//! to zero.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{KrausCoefficients, MeasurementModel, OutcomeWeights};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub m: f64,
    pub l: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<CoefficientEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightEntry>>,
}

impl PovmDocument {
    pub fn into_model<T: Real>(self) -> Result<MeasurementModel<T>> {
        match (self.outcomes, self.weights) {
            (Some(outcomes), None) => MeasurementModel::validate(
                outcomes
                    .into_iter()
                    .map(|e| {
                        KrausCoefficients::new(
                            T::lit(e.m),
                            T::lit(e.l),
                            T::lit(e.alpha),
                            T::lit(e.delta),
                        )
                    })
                    .collect(),
            ),
            (None, Some(weights)) => MeasurementModel::from_weights(
                &weights
                    .into_iter()
                    .map(|w| OutcomeWeights::new(T::lit(w.p), T::lit(w.q)))
                    .collect::<Vec<_>>(),
            ),
            (Some(_), Some(_)) => Err(Error::PovmFormat(
                "both \"outcomes\" and \"weights\" present".into(),
            )),
            (None, None) => Err(Error::PovmFormat(
                "one of \"outcomes\" or \"weights\" is required".into(),
            )),
        }
    }
}

pub fn parse_povm<T: Real>(text: &str) -> Result<MeasurementModel<T>> {
    let doc: PovmDocument =
        serde_json::from_str(text).map_err(|e| Error::PovmFormat(e.to_string()))?;
    doc.into_model()
}

pub fn load_povm<T: Real>(path: impl AsRef<Path>) -> Result<MeasurementModel<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::PovmFormat(format!("{}: {e}", path.display())))?;
    parse_povm(&text).map_err(|e| match e {
        Error::PovmFormat(msg) => Error::PovmFormat(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Coefficient form of a measurement, suitable for [`parse_povm`].
pub fn to_json<T: Real>(model: &MeasurementModel<T>) -> String {
    let doc = PovmDocument {
        outcomes: Some(
            model
                .coefficients()
                .into_iter()
                .map(|c| CoefficientEntry {
                    m: c.m.as_f64(),
                    l: c.l.as_f64(),
                    alpha: c.alpha.as_f64(),
                    delta: c.delta.as_f64(),
                })
                .collect(),
        ),
        weights: None,
    };
    serde_json::to_string(&doc).expect("plain numbers serialize")
}
