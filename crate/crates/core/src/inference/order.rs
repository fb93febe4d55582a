use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Evidence, Network};

/// Variables to sum out, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationPlan {
    pub order: Vec<String>,
}

impl EliminationPlan {
    pub fn new(order: Vec<String>) -> Self {
        EliminationPlan { order }
    }

    /// Every variable except the query and the evidence appears exactly once.
    pub fn check(&self, net: &Network, query: &str, evidence: &Evidence) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in &self.order {
            if net.index_of(v).is_none() {
                return Err(Error::UnknownVariable(v.clone()));
            }
            if v == query || evidence.contains(v) {
                return Err(Error::input(format!("plan eliminates query or evidence variable `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::input(format!("plan eliminates `{v}` twice")));
            }
        }
        let expected = net
            .variables()
            .iter()
            .filter(|v| v.id() != query && !evidence.contains(v.id()))
            .count();
        if seen.len() != expected {
            return Err(Error::input(format!(
                "plan covers {} of {expected} variables",
                seen.len()
            )));
        }
        Ok(())
    }
}

/// Greedy min-fill order over the moral graph, with the evidence variables
/// removed first and the query kept. Ties go to the lexicographically
/// smallest variable id.
pub fn elimination_order(net: &Network, query: &str, evidence: &Evidence) -> Result<EliminationPlan> {
    let q = net.index_of(query).ok_or_else(|| Error::UnknownVariable(query.to_string()))?;
    let fixed = net.resolve_evidence(evidence)?;
    let order = min_fill(net, Some(q), &fixed);
    Ok(EliminationPlan {
        order: order.into_iter().map(|i| net.variable_at(i).id().to_string()).collect(),
    })
}

pub(crate) fn min_fill(net: &Network, query: Option<usize>, fixed: &[Option<usize>]) -> Vec<usize> {
    let n = net.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let link = |a: usize, b: usize, adj: &mut Vec<BTreeSet<usize>>| {
        if a != b {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    };
    for child in 0..n {
        let ps = net.parents_of(child);
        for (k, &p) in ps.iter().enumerate() {
            link(child, p, &mut adj);
            for &o in &ps[k + 1..] {
                link(p, o, &mut adj);
            }
        }
    }

    let mut alive: Vec<bool> = (0..n).map(|i| fixed[i].is_none()).collect();
    for i in 0..n {
        if !alive[i] {
            let nbrs: Vec<usize> = adj[i].iter().copied().collect();
            for j in nbrs {
                adj[j].remove(&i);
            }
            adj[i].clear();
        }
    }

    let mut candidates: Vec<usize> = (0..n).filter(|&i| alive[i] && Some(i) != query).collect();
    candidates.sort_by(|&a, &b| net.variable_at(a).id().cmp(net.variable_at(b).id()));

    let mut order = Vec::with_capacity(candidates.len());
    while !candidates.is_empty() {
        let (pos, _) = candidates
            .iter()
            .enumerate()
            .map(|(pos, &v)| (pos, fill_in(&adj, v)))
            .min_by_key(|&(pos, fill)| (fill, pos))
            .unwrap();
        let v = candidates.remove(pos);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (k, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[k + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (k, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[k + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}
