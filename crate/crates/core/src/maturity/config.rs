use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AggregationWeights, DriftFactorSpec, MaturityFramework, NetworkLayout, Question};
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/default_framework.json");

/// Framework, aggregation weights and drift catalogue loaded from one JSON
/// document with `framework`, `weights` and `drift_factors` keys.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameworkConfig {
    pub framework: MaturityFramework,
    pub weights: AggregationWeights,
    pub drift_factors: Vec<DriftFactorSpec>,
}

#[derive(Serialize, Deserialize)]
struct Document {
    framework: FrameworkSection,
    weights: AggregationWeights,
    drift_factors: Vec<DriftFactorSpec>,
}

#[derive(Serialize, Deserialize)]
struct FrameworkSection {
    domains: Vec<String>,
    levels: u8,
    questions: Vec<Question>,
}

impl FrameworkConfig {
    pub fn new(
        framework: MaturityFramework,
        weights: AggregationWeights,
        drift_factors: Vec<DriftFactorSpec>,
    ) -> Result<Self> {
        if weights.len() != framework.levels() as usize {
            return Err(Error::input(format!(
                "{} weights for {} levels",
                weights.len(),
                framework.levels()
            )));
        }
        NetworkLayout::plan(&framework, &drift_factors)?;
        Ok(FrameworkConfig { framework, weights, drift_factors })
    }

    /// Default framework: four domains, five levels, the expert weights and
    /// the fourteen offshore drift factors.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled framework is valid")
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        let fw = MaturityFramework::new(doc.framework.domains, doc.framework.levels, doc.framework.questions)?;
        Self::new(fw, doc.weights, doc.drift_factors)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::format(path.display(), j.to_string()),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            framework: FrameworkSection {
                domains: self.framework.domains().to_vec(),
                levels: self.framework.levels(),
                questions: self.framework.questions().collect(),
            },
            weights: self.weights.clone(),
            drift_factors: self.drift_factors.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn drift_ids(&self) -> Vec<String> {
        self.drift_factors.iter().map(|d| d.id.clone()).collect()
    }
}
