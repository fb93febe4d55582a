use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{validate_network, Cpt, Network, ValidationReport, Variable, ROW_SUM_TOLERANCE};
use crate::error::{Error, Result};

/// Rows whose sum is off by at most this much are rescaled on load; larger
/// deviations are left in place for validation to reject.
pub const ROW_RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// On-disk JSON form of a network: `{"variables": [...], "cpts": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub variables: Vec<Variable>,
    pub cpts: Vec<Cpt>,
}

impl NetworkDocument {
    pub fn from_network(net: &Network) -> Self {
        NetworkDocument { variables: net.variables().to_vec(), cpts: net.cpts().to_vec() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("network serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path.display(), e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// Rescales rows that miss unit sum by more than [`ROW_SUM_TOLERANCE`] but
    /// no more than [`ROW_RENORMALIZE_TOLERANCE`]. Returns the number of rows
    /// touched.
    pub fn renormalize(&mut self) -> usize {
        let mut touched = 0;
        for cpt in &mut self.cpts {
            for row in cpt.rows_mut() {
                if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    continue;
                }
                let sum: f64 = row.iter().sum();
                let dev = (sum - 1.0).abs();
                if dev > ROW_SUM_TOLERANCE && dev <= ROW_RENORMALIZE_TOLERANCE {
                    row.iter_mut().for_each(|p| *p /= sum);
                    touched += 1;
                }
            }
        }
        touched
    }

    pub fn validate(&self) -> ValidationReport {
        validate_network(&self.variables, &self.cpts)
    }

    /// Renormalizes within tolerance, then validates into a [`Network`].
    pub fn into_network(mut self) -> Result<Network> {
        let touched = self.renormalize();
        if touched > 0 {
            log::debug!("renormalized {touched} CPT rows on load");
        }
        Network::new(self.variables, self.cpts)
    }
}

impl Network {
    pub fn load(path: impl AsRef<Path>) -> Result<Network> {
        NetworkDocument::load(path)?.into_network()
    }

    pub fn to_json(&self) -> String {
        NetworkDocument::from_network(self).to_json()
    }
}
