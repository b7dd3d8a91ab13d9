use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{KineticError, Result};

/// One sampled value backing a threshold claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub label: String,
    /// Parameter value (or point) where the sample was taken.
    pub at: Vec<f64>,
    pub value: f64,
}

/// A computed threshold together with the samples that certify it at the
/// stated resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub parameter: String,
    pub value: f64,
    pub certificate: Vec<CertificateEntry>,
    pub grid: BTreeMap<String, serde_json::Value>,
}

impl ThresholdReport {
    pub fn new(parameter: &str, value: f64) -> Self {
        ThresholdReport {
            parameter: parameter.to_string(),
            value,
            certificate: Vec::new(),
            grid: BTreeMap::new(),
        }
    }

    pub fn certify(mut self, label: &str, at: &[f64], value: f64) -> Self {
        self.certificate.push(CertificateEntry { label: label.to_string(), at: at.to_vec(), value });
        self
    }

    pub fn with_grid(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.grid.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| KineticError::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| KineticError::Format(e.to_string()))
    }
}
