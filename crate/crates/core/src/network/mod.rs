//! Discrete Bayesian networks: variables, conditional probability tables,
//! structural validation, the chain-rule joint, and an enumeration oracle.
//!
//! Conditional probability tables store one row per parent configuration.
//! Rows are ordered by mixed-radix enumeration of the parent states with the
//! *last* listed parent varying fastest, and columns follow the child's state
//! order.

mod json;
mod validate;
pub mod xmlbif;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use json::{NetworkDocument, ROW_RENORMALIZE_TOLERANCE};
pub use validate::{validate_network, ValidationReport, Violation, ViolationKind};

/// Tolerance for a CPT row or distribution to count as summing to one.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Upper bound on the number of joint configurations the oracle will enumerate.
pub const BRUTE_FORCE_CAP: u128 = 1 << 24;

/// A discrete random variable with an ordered list of state labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    id: String,
    states: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(
        id: impl Into<String>,
        states: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let id = id.into();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if id.is_empty() {
            return Err(Error::input("variable id must be non-empty"));
        }
        if states.len() < 2 {
            return Err(Error::input(format!(
                "variable `{id}` needs at least two states, got {}",
                states.len()
            )));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::input(format!("variable `{id}` repeats state `{s}`")));
            }
        }
        Ok(Variable { id, states })
    }

    /// Binary variable with states `T`, `F`.
    pub fn binary(id: impl Into<String>) -> Self {
        Variable { id: id.into(), states: vec!["T".into(), "F".into()] }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}

/// Conditional probability table for one child variable.
///
/// The table is stored as given; whether it is well formed is decided by
/// [`validate_network`] in the context of a whole network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cpt {
    child: String,
    parents: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Cpt {
    pub fn new(child: impl Into<String>, parents: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        Cpt { child: child.into(), parents, rows }
    }

    /// A parentless table holding a single prior row.
    pub fn prior(child: impl Into<String>, row: Vec<f64>) -> Self {
        Cpt::new(child, Vec::new(), vec![row])
    }

    pub fn child(&self) -> &str {
        &self.child
    }

    pub fn parents(&self) -> &[String] {
        &self.parents
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.rows[index]
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.rows
    }
}

/// Mixed-radix index of a configuration, last position varying fastest.
pub fn config_index(states: &[usize], cards: &[usize]) -> usize {
    states.iter().zip(cards).fold(0, |acc, (&s, &c)| acc * c + s)
}

/// Inverse of [`config_index`].
pub fn config_states(mut index: usize, cards: &[usize]) -> Vec<usize> {
    let mut states = vec![0; cards.len()];
    for (slot, &c) in states.iter_mut().zip(cards).rev() {
        *slot = index % c;
        index /= c;
    }
    states
}

/// Observed states, keyed by variable id. At most one binding per variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Evidence {
    bindings: BTreeMap<String, String>,
}

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, variable: impl Into<String>, state: impl Into<String>) -> Self {
        self.insert(variable, state);
        self
    }

    /// Binds `variable`, replacing any earlier binding.
    pub fn insert(&mut self, variable: impl Into<String>, state: impl Into<String>) {
        self.bindings.insert(variable.into(), state.into());
    }

    pub fn remove(&mut self, variable: &str) -> Option<String> {
        self.bindings.remove(variable)
    }

    pub fn get(&self, variable: &str) -> Option<&str> {
        self.bindings.get(variable).map(String::as_str)
    }

    pub fn contains(&self, variable: &str) -> bool {
        self.bindings.contains_key(variable)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Evidence {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        let mut e = Evidence::new();
        for (k, v) in iter {
            e.insert(k, v);
        }
        e
    }
}

/// A probability distribution over the states of one variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub variable: String,
    pub states: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl Distribution {
    pub fn probability(&self, state: &str) -> Option<f64> {
        self.states.iter().position(|s| s == state).map(|i| self.probabilities[i])
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Largest absolute difference to `other`, state by state.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({})", self.variable)?;
        for (s, p) in self.states.iter().zip(&self.probabilities) {
            write!(f, " {s}={p:.6}")?;
        }
        Ok(())
    }
}

/// A validated discrete Bayesian network.
///
/// Every variable owns exactly one CPT, every parent exists, rows sum to one
/// and the parent graph is acyclic. Construct with [`Network::new`]; use
/// [`validate_network`] on raw parts to obtain a full violation report.
#[derive(Clone, Debug)]
pub struct Network {
    variables: Vec<Variable>,
    /// Aligned with `variables`.
    cpts: Vec<Cpt>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl Network {
    pub fn new(variables: Vec<Variable>, cpts: Vec<Cpt>) -> Result<Self> {
        let report = validate_network(&variables, &cpts);
        if !report.is_empty() {
            return Err(Error::Invalid(report));
        }

        let index: HashMap<String, usize> =
            variables.iter().enumerate().map(|(i, v)| (v.id.clone(), i)).collect();
        let mut aligned: Vec<Option<Cpt>> = vec![None; variables.len()];
        for cpt in cpts {
            let i = index[cpt.child()];
            aligned[i] = Some(cpt);
        }
        let cpts: Vec<Cpt> = aligned.into_iter().map(|c| c.expect("validated")).collect();
        let parents: Vec<Vec<usize>> = cpts
            .iter()
            .map(|c| c.parents().iter().map(|p| index[p.as_str()]).collect())
            .collect();
        let topo = validate::topological_order(&parents).expect("validated acyclic");

        Ok(Network { variables, cpts, index, parents, topo })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn variable(&self, id: &str) -> Option<&Variable> {
        self.index_of(id).map(|i| &self.variables[i])
    }

    pub fn cpt(&self, id: &str) -> Option<&Cpt> {
        self.index_of(id).map(|i| &self.cpts[i])
    }

    pub(crate) fn variable_at(&self, i: usize) -> &Variable {
        &self.variables[i]
    }

    pub(crate) fn parents_of(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    /// Variable indices in a topological order (parents before children).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Variable ids in topological order.
    pub fn topological_ids(&self) -> Vec<&str> {
        self.topo.iter().map(|&i| self.variables[i].id()).collect()
    }

    /// Total number of joint configurations, saturating.
    pub fn state_space(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.cardinality() as u128))
    }

    /// Resolves evidence into a per-variable state index.
    pub fn resolve_evidence(&self, evidence: &Evidence) -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; self.len()];
        for (var, state) in evidence.iter() {
            let i = self
                .index_of(var)
                .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
            let s = self.variables[i].state_index(state).ok_or_else(|| Error::UnknownState {
                variable: var.to_string(),
                state: state.to_string(),
            })?;
            out[i] = Some(s);
        }
        Ok(out)
    }

    /// Product of the CPT entries selected by a full assignment given as state
    /// indices aligned with [`Network::variables`].
    pub fn joint_probability_indexed(&self, states: &[usize]) -> f64 {
        debug_assert_eq!(states.len(), self.len());
        let mut p = 1.0;
        for (i, cpt) in self.cpts.iter().enumerate() {
            let row = self.parent_row(i, states);
            p *= cpt.rows[row][states[i]];
            if p == 0.0 {
                break;
            }
        }
        p
    }

    pub(crate) fn parent_row(&self, i: usize, states: &[usize]) -> usize {
        self.parents[i]
            .iter()
            .fold(0, |acc, &p| acc * self.variables[p].cardinality() + states[p])
    }

    pub(crate) fn distribution(&self, i: usize, probabilities: Vec<f64>) -> Distribution {
        let v = &self.variables[i];
        Distribution { variable: v.id.clone(), states: v.states.clone(), probabilities }
    }
}

/// Chain-rule probability of a full assignment.
pub fn joint_probability(net: &Network, assignment: &Evidence) -> Result<f64> {
    let resolved = net.resolve_evidence(assignment)?;
    let mut states = Vec::with_capacity(net.len());
    for (i, s) in resolved.into_iter().enumerate() {
        match s {
            Some(s) => states.push(s),
            None => {
                return Err(Error::input(format!(
                    "assignment leaves `{}` unbound",
                    net.variable_at(i).id()
                )))
            }
        }
    }
    Ok(net.joint_probability_indexed(&states))
}

/// Exact posterior by enumerating every full assignment consistent with the
/// evidence. Exponential; intended as a test oracle for small networks.
pub fn brute_force_posterior(
    net: &Network,
    query: &str,
    evidence: &Evidence,
) -> Result<Distribution> {
    let q = net.index_of(query).ok_or_else(|| Error::UnknownVariable(query.to_string()))?;
    if evidence.contains(query) {
        return Err(Error::input(format!("query variable `{query}` is bound in the evidence")));
    }
    let configurations = net.state_space();
    if configurations > BRUTE_FORCE_CAP {
        return Err(Error::StateSpaceTooLarge { configurations, cap: BRUTE_FORCE_CAP });
    }
    let fixed = net.resolve_evidence(evidence)?;

    let free: Vec<usize> = (0..net.len()).filter(|&i| fixed[i].is_none()).collect();
    let mut states: Vec<usize> = fixed.iter().map(|s| s.unwrap_or(0)).collect();
    let mut mass = vec![0.0; net.variable_at(q).cardinality()];

    'outer: loop {
        mass[states[q]] += net.joint_probability_indexed(&states);
        // odometer over the free variables, last fastest
        for &i in free.iter().rev() {
            states[i] += 1;
            if states[i] < net.variable_at(i).cardinality() {
                continue 'outer;
            }
            states[i] = 0;
        }
        break;
    }

    let total: f64 = mass.iter().sum();
    if total <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    mass.iter_mut().for_each(|m| *m /= total);
    Ok(net.distribution(q, mass))
}
