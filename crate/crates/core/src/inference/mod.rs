//! Exact inference by variable elimination.
//!
//! Evidence is applied by slicing every CPT factor before elimination, and
//! variables are summed out in a greedy min-fill order computed on the
//! moralized graph. The same [`posterior`] call answers both predictive
//! queries (evidence upstream of the query) and diagnostic ones (evidence
//! downstream).

mod factor;
mod order;

pub use factor::{factor_marginalize, factor_product, factor_reduce, Factor};
pub use order::{elimination_order, EliminationPlan};

use crate::error::{Error, Result};
use crate::network::{Distribution, Evidence, Network};

/// Posterior of `query` given `evidence`, eliminating in min-fill order.
pub fn posterior(net: &Network, query: &str, evidence: &Evidence) -> Result<Distribution> {
    check_query(net, query, evidence)?;
    let plan = elimination_order(net, query, evidence)?;
    run(net, query, evidence, &plan)
}

/// Posterior of `query` under a caller-supplied elimination order.
///
/// The plan must name every variable other than the query and the evidence
/// exactly once.
pub fn posterior_with_plan(
    net: &Network,
    query: &str,
    evidence: &Evidence,
    plan: &EliminationPlan,
) -> Result<Distribution> {
    check_query(net, query, evidence)?;
    plan.check(net, query, evidence)?;
    run(net, query, evidence, plan)
}

/// Probability of the evidence under the model.
pub fn evidence_probability(net: &Network, evidence: &Evidence) -> Result<f64> {
    let fixed = net.resolve_evidence(evidence)?;
    let mut factors: Vec<Factor> = net
        .cpts()
        .iter()
        .map(|c| {
            let f = Factor::from_cpt(net, c);
            let idx: Vec<Option<usize>> =
                f.scope().iter().map(|v| fixed[net.index_of(v.id()).unwrap()]).collect();
            factor::reduce_indexed(&f, &idx)
        })
        .collect();
    let order = order::min_fill(net, None, &fixed);
    for &v in &order {
        factors = eliminate(factors, net.variable_at(v).id())?;
    }
    Ok(factors.iter().map(|f| f.values()[0]).product())
}

fn check_query(net: &Network, query: &str, evidence: &Evidence) -> Result<()> {
    if net.index_of(query).is_none() {
        return Err(Error::UnknownVariable(query.to_string()));
    }
    if evidence.contains(query) {
        return Err(Error::input(format!("query variable `{query}` is bound in the evidence")));
    }
    Ok(())
}

fn run(net: &Network, query: &str, evidence: &Evidence, plan: &EliminationPlan) -> Result<Distribution> {
    let fixed = net.resolve_evidence(evidence)?;
    let mut factors: Vec<Factor> = Vec::with_capacity(net.len());
    for cpt in net.cpts() {
        let f = Factor::from_cpt(net, cpt);
        let idx: Vec<Option<usize>> =
            f.scope().iter().map(|v| fixed[net.index_of(v.id()).unwrap()]).collect();
        factors.push(factor::reduce_indexed(&f, &idx));
    }

    for var in &plan.order {
        factors = eliminate(factors, var)?;
    }

    let q = net.index_of(query).unwrap();
    let qvar = net.variable_at(q).clone();
    let mut result = Factor::new(vec![qvar.clone()], vec![1.0; qvar.cardinality()])?;
    for f in &factors {
        result = factor_product(&result, f)?;
    }
    let total = result.total();
    if !(total > 0.0) {
        return Err(Error::ImpossibleEvidence);
    }
    let probabilities = result.values().iter().map(|p| p / total).collect();
    Ok(net.distribution(q, probabilities))
}

/// Multiplies every factor mentioning `var` and sums `var` out.
fn eliminate(factors: Vec<Factor>, var: &str) -> Result<Vec<Factor>> {
    let (touching, mut rest): (Vec<Factor>, Vec<Factor>) =
        factors.into_iter().partition(|f| f.contains(var));
    let mut iter = touching.into_iter();
    let Some(first) = iter.next() else {
        return Ok(rest);
    };
    let mut product = first;
    for f in iter {
        product = factor_product(&product, &f)?;
    }
    rest.push(factor_marginalize(&product, var)?);
    Ok(rest)
}
