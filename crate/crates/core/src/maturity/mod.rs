//! Maturity framework, drift-factor nodes and assembly of the overcost network.
//!
//! Every maturity question becomes a binary `No`/`Yes` node. A drift factor
//! is a binary `True`/`False` node whose parents are the level nodes of one
//! (cell, domain) pair; its CPT follows the additive rule
//! `P(Drift = False) = Σ weight(level)` over the levels answered `Yes`.
//! The overcost node has every drift factor as a parent.

mod config;
mod framework;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learning::OvercostBand;
use crate::network::{config_states, Cpt, Network, Variable};

pub use config::FrameworkConfig;
pub use framework::{
    assessment_to_evidence, Answer, Assessment, Cell, Chronology, Invariant, MaturityFramework,
    Question, QuestionKey, DEFAULT_DOMAINS, DEFAULT_LEVELS,
};

pub const YES: &str = "Yes";
pub const NO: &str = "No";
pub const TRUE: &str = "True";
pub const FALSE: &str = "False";

/// Variable id of the overcost node.
pub const OVERCOST: &str = "Overcost";

/// Maturity node states; `No` first so an all-`No` configuration is row 0.
pub fn maturity_variable(key: &QuestionKey) -> Variable {
    Variable::new(key.to_string(), [NO, YES]).expect("two distinct states")
}

/// Drift node states in CPT column order.
pub fn drift_variable(id: &str) -> Variable {
    Variable::new(id, [TRUE, FALSE]).expect("two distinct states")
}

pub fn overcost_variable() -> Variable {
    Variable::new(OVERCOST, OvercostBand::ALL.iter().map(|b| b.label())).expect("four bands")
}

/// Per-level probability of avoiding a drift when that level is reached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AggregationWeights(Vec<f64>);

impl AggregationWeights {
    /// Weights must lie in `[0, 1]` and sum to at most one. A sum below one
    /// is accepted with a warning and leaves a residual drift probability even
    /// when every level is reached.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::input("no aggregation weights"));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::input(format!("aggregation weight {w} outside [0, 1]")));
        }
        let sum: f64 = weights.iter().sum();
        if sum > 1.0 + 1e-9 {
            return Err(Error::input(format!("aggregation weights sum to {sum} > 1")));
        }
        if sum < 1.0 - 1e-9 {
            log::warn!("aggregation weights sum to {sum}; residual drift risk {}", 1.0 - sum);
        }
        Ok(AggregationWeights(weights))
    }

    /// 5%, 10%, 15%, 30%, 40% for levels one to five.
    pub fn expert_default() -> Self {
        AggregationWeights(vec![0.05, 0.10, 0.15, 0.30, 0.40])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight of `level` (1-based).
    pub fn weight(&self, level: u8) -> f64 {
        self.0[level as usize - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for AggregationWeights {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        AggregationWeights::new(v)
    }
}

impl From<AggregationWeights> for Vec<f64> {
    fn from(w: AggregationWeights) -> Self {
        w.0
    }
}

/// A drift factor mapped onto one framework cell and domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriftFactorSpec {
    pub id: String,
    pub label: String,
    pub cell: Cell,
    pub domain: String,
}

/// CPT of a drift node over its level parents (level 1 first, last level
/// fastest in the row order).
pub fn drift_cpt(w: &AggregationWeights, child: &str, parents: Vec<String>) -> Result<Cpt> {
    if parents.len() != w.len() {
        return Err(Error::input(format!(
            "{} aggregation weights for {} level parents",
            w.len(),
            parents.len()
        )));
    }
    let cards = vec![2; parents.len()];
    let rows = (0..1usize << parents.len())
        .map(|r| {
            let avoid: f64 = config_states(r, &cards)
                .iter()
                .zip(w.as_slice())
                .filter(|(&s, _)| s == 1)
                .fold(0.0, |acc, (_, w)| acc + w)
                .min(1.0);
            vec![1.0 - avoid, avoid]
        })
        .collect();
    Ok(Cpt::new(child, parents, rows))
}

/// The drift CPT over five generic level parents `LV1`..`LV5`.
pub fn drift_cpt_from_weights(w: &AggregationWeights) -> Result<Cpt> {
    if w.len() != DEFAULT_LEVELS as usize {
        return Err(Error::input(format!("expected {DEFAULT_LEVELS} weights, got {}", w.len())));
    }
    drift_cpt(w, "Drift", (1..=DEFAULT_LEVELS).map(|l| format!("LV{l}")).collect())
}

/// Node inventory that [`build_network`] will create for a set of drifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkLayout {
    /// Maturity nodes in order of first reference.
    pub maturity: Vec<QuestionKey>,
    pub drifts: Vec<String>,
}

impl NetworkLayout {
    pub fn plan(fw: &MaturityFramework, drifts: &[DriftFactorSpec]) -> Result<Self> {
        let mut maturity = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut ids = Vec::new();
        for d in drifts {
            if !fw.has_domain(&d.domain) {
                return Err(Error::input(format!(
                    "drift `{}` references unknown domain `{}`",
                    d.id, d.domain
                )));
            }
            if d.id.is_empty() || d.id == OVERCOST || d.id.parse::<QuestionKey>().is_ok() {
                return Err(Error::input(format!("drift id `{}` is reserved or malformed", d.id)));
            }
            if ids.contains(&d.id) {
                return Err(Error::input(format!("drift `{}` listed twice", d.id)));
            }
            ids.push(d.id.clone());
            if seen.insert((d.cell, d.domain.clone())) {
                maturity.extend((1..=fw.levels()).map(|l| QuestionKey::new(d.cell, d.domain.clone(), l)));
            }
        }
        Ok(NetworkLayout { maturity, drifts: ids })
    }

    pub fn node_count(&self) -> usize {
        self.maturity.len() + self.drifts.len() + 1
    }
}

/// Assembles maturity, drift and overcost nodes into one network.
///
/// Drifts on the same (cell, domain) share their maturity parents. Maturity
/// roots get a uniform prior. `target` must be the overcost CPT with the
/// drift ids as parents, in the listed order.
pub fn build_network(
    fw: &MaturityFramework,
    drifts: &[DriftFactorSpec],
    w: &AggregationWeights,
    target: Cpt,
) -> Result<DriftNetwork> {
    if w.len() != fw.levels() as usize {
        return Err(Error::input(format!("{} weights for {} levels", w.len(), fw.levels())));
    }
    let layout = NetworkLayout::plan(fw, drifts)?;
    if target.child() != OVERCOST {
        return Err(Error::input(format!("target CPT is for `{}`, expected `{OVERCOST}`", target.child())));
    }
    if target.parents() != layout.drifts.as_slice() {
        return Err(Error::input("target CPT parents do not match the drift ids in order"));
    }

    let mut variables = Vec::with_capacity(layout.node_count());
    let mut cpts = Vec::with_capacity(layout.node_count());
    for key in &layout.maturity {
        variables.push(maturity_variable(key));
        cpts.push(Cpt::prior(key.to_string(), vec![0.5, 0.5]));
    }
    for d in drifts {
        variables.push(drift_variable(&d.id));
        let parents = (1..=fw.levels())
            .map(|l| QuestionKey::new(d.cell, d.domain.clone(), l).to_string())
            .collect();
        cpts.push(drift_cpt(w, &d.id, parents)?);
    }
    variables.push(overcost_variable());
    cpts.push(target);

    let network = Network::new(variables, cpts)?;
    DriftNetwork::from_network(network)
}

/// A network with identified maturity, drift and overcost roles.
#[derive(Clone, Debug)]
pub struct DriftNetwork {
    network: Network,
    drifts: Vec<String>,
    maturity: BTreeMap<String, QuestionKey>,
}

impl DriftNetwork {
    /// Recognizes roles by convention: the node named [`OVERCOST`], its
    /// parents as drift factors, and every node whose id parses as a
    /// [`QuestionKey`] as a maturity node.
    pub fn from_network(network: Network) -> Result<Self> {
        let cpt = network
            .cpt(OVERCOST)
            .ok_or_else(|| Error::input(format!("network has no `{OVERCOST}` node")))?;
        let overcost = network.variable(OVERCOST).unwrap();
        let bands: Vec<&str> = OvercostBand::ALL.iter().map(|b| b.label()).collect();
        if overcost.states() != bands.as_slice() {
            return Err(Error::input(format!("`{OVERCOST}` states must be {bands:?}")));
        }
        let drifts = cpt.parents().to_vec();
        for d in &drifts {
            let v = network.variable(d).unwrap();
            if v.states() != [TRUE, FALSE] {
                return Err(Error::input(format!("drift `{d}` must have states [True, False]")));
            }
        }
        let mut maturity = BTreeMap::new();
        for v in network.variables() {
            if let Ok(key) = v.id().parse::<QuestionKey>() {
                if v.states() != [NO, YES] {
                    return Err(Error::input(format!("maturity node `{}` must have states [No, Yes]", v.id())));
                }
                maturity.insert(v.id().to_string(), key);
            }
        }
        Ok(DriftNetwork { network, drifts, maturity })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn into_network(self) -> Network {
        self.network
    }

    pub fn drift_ids(&self) -> &[String] {
        &self.drifts
    }

    /// Maturity nodes keyed by node id.
    pub fn maturity_nodes(&self) -> impl Iterator<Item = (&str, &QuestionKey)> {
        self.maturity.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn has_maturity_node(&self, id: &str) -> bool {
        self.maturity.contains_key(id)
    }

    pub fn overcost_cpt(&self) -> &Cpt {
        self.network.cpt(OVERCOST).unwrap()
    }
}
