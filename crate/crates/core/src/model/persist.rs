use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Encoding, ParameterSet, SaqnnConfig};
use crate::error::{Error, Result};
use crate::spectral::{Basis, FrequencyVector};

fn one() -> f64 {
    1.0
}

/// On-disk model document.
///
/// `y_scale` is the factor that maps model outputs back to raw target units
/// (the divisor used when the training data was normalized).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub d: usize,
    pub basis: Basis,
    pub encoding: Encoding,
    pub m: usize,
    pub frequencies: Vec<Vec<i64>>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub a: f64,
    pub seed: u64,
    #[serde(default = "one")]
    pub y_scale: f64,
}

impl SavedModel {
    pub fn new(config: &SaqnnConfig, params: &ParameterSet, seed: u64) -> Self {
        SavedModel {
            d: config.d(),
            basis: config.basis(),
            encoding: config.encoding(),
            m: config.m(),
            frequencies: config.frequencies().iter().map(|j| j.components().to_vec()).collect(),
            theta: params.theta.clone(),
            phi: params.phi.clone(),
            a: params.a,
            seed,
            y_scale: 1.0,
        }
    }

    /// Validated configuration and parameters.
    pub fn parts(&self) -> Result<(SaqnnConfig, ParameterSet)> {
        let freqs = self.frequencies.iter().cloned().map(FrequencyVector).collect();
        let config = SaqnnConfig::with_control_size(self.d, freqs, self.basis, self.encoding, self.m)?;
        let params = ParameterSet::new(self.theta.clone(), self.phi.clone(), self.a)?;
        params.check(&config)?;
        if !(self.y_scale.is_finite() && self.y_scale > 0.0) {
            return Err(Error::domain("y_scale must be finite and positive"));
        }
        Ok((config, params))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: SavedModel = serde_json::from_str(text)?;
        model.parts()?;
        Ok(model)
    }
}

pub fn save_model(path: &Path, model: &SavedModel) -> Result<()> {
    std::fs::write(path, model.to_json()? + "\n")?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<SavedModel> {
    SavedModel::from_json(&std::fs::read_to_string(path)?)
}
