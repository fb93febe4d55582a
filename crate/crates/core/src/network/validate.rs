use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Cpt, Variable, ROW_SUM_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Cycle,
    MissingCpt,
    DuplicateCpt,
    UnknownChild,
    DanglingParent,
    DuplicateParent,
    DuplicateVariable,
    InvalidVariable,
    DimensionMismatch,
    ProbabilityRange,
    RowSum,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Cycle => "cycle",
            ViolationKind::MissingCpt => "missing-cpt",
            ViolationKind::DuplicateCpt => "duplicate-cpt",
            ViolationKind::UnknownChild => "unknown-child",
            ViolationKind::DanglingParent => "dangling-parent",
            ViolationKind::DuplicateParent => "duplicate-parent",
            ViolationKind::DuplicateVariable => "duplicate-variable",
            ViolationKind::InvalidVariable => "invalid-variable",
            ViolationKind::DimensionMismatch => "dimension-mismatch",
            ViolationKind::ProbabilityRange => "probability-range",
            ViolationKind::RowSum => "row-sum",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub variable: String,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.kind, self.variable, self.detail)
    }
}

/// Every structural or numerical problem found in a network. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn has(&self, kind: ViolationKind, variable: &str) -> bool {
        self.violations.iter().any(|v| v.kind == kind && v.variable == variable)
    }

    fn push(&mut self, variable: &str, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { variable: variable.to_string(), kind, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a set of variables and CPTs for everything [`super::Network`] requires.
pub fn validate_network(variables: &[Variable], cpts: &[Cpt]) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, v) in variables.iter().enumerate() {
        if index.insert(v.id(), i).is_some() {
            report.push(v.id(), ViolationKind::DuplicateVariable, "variable id declared twice");
        }
        if v.id().is_empty() {
            report.push(v.id(), ViolationKind::InvalidVariable, "empty variable id");
        }
        if v.cardinality() < 2 {
            report.push(v.id(), ViolationKind::InvalidVariable, "fewer than two states");
        }
        let distinct: BTreeSet<&String> = v.states().iter().collect();
        if distinct.len() != v.cardinality() {
            report.push(v.id(), ViolationKind::InvalidVariable, "repeated state label");
        }
    }

    let mut owner: Vec<Option<usize>> = vec![None; variables.len()];
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); variables.len()];
    for (ci, cpt) in cpts.iter().enumerate() {
        let Some(&child) = index.get(cpt.child()) else {
            report.push(cpt.child(), ViolationKind::UnknownChild, "CPT for an undeclared variable");
            continue;
        };
        if owner[child].is_some() {
            report.push(cpt.child(), ViolationKind::DuplicateCpt, "more than one CPT");
            continue;
        }
        owner[child] = Some(ci);
        check_cpt(cpt, variables, &index, &mut parents[child], &mut report);
    }

    for (i, v) in variables.iter().enumerate() {
        if owner[i].is_none() {
            report.push(v.id(), ViolationKind::MissingCpt, "no CPT");
        }
    }

    for cycle in find_cycles(&parents) {
        let path: Vec<&str> = cycle.iter().map(|&i| variables[i].id()).collect();
        report.push(
            variables[cycle[0]].id(),
            ViolationKind::Cycle,
            format!("{} -> {}", path.join(" -> "), path[0]),
        );
    }

    report
}

fn check_cpt(
    cpt: &Cpt,
    variables: &[Variable],
    index: &HashMap<&str, usize>,
    parent_idx: &mut Vec<usize>,
    report: &mut ValidationReport,
) {
    let child = cpt.child();
    let mut dims_known = true;
    let mut configs: usize = 1;
    for (k, p) in cpt.parents().iter().enumerate() {
        if cpt.parents()[..k].contains(p) {
            report.push(child, ViolationKind::DuplicateParent, format!("parent `{p}` listed twice"));
        }
        match index.get(p.as_str()) {
            Some(&pi) => {
                parent_idx.push(pi);
                configs = configs.saturating_mul(variables[pi].cardinality());
            }
            None => {
                dims_known = false;
                report.push(child, ViolationKind::DanglingParent, format!("parent `{p}` is not declared"));
            }
        }
    }

    let card = variables[index[child]].cardinality();
    if dims_known && cpt.rows().len() != configs {
        report.push(
            child,
            ViolationKind::DimensionMismatch,
            format!("{} rows, expected {configs}", cpt.rows().len()),
        );
    }
    for (r, row) in cpt.rows().iter().enumerate() {
        if row.len() != card {
            report.push(
                child,
                ViolationKind::DimensionMismatch,
                format!("row {r} has {} entries, expected {card}", row.len()),
            );
            continue;
        }
        if let Some(bad) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            report.push(child, ViolationKind::ProbabilityRange, format!("row {r} holds {bad}"));
            continue;
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            report.push(child, ViolationKind::RowSum, format!("row {r} sums to {sum}"));
        }
    }
}

/// Kahn's algorithm, smallest index first. `None` if the graph has a cycle.
pub(crate) fn topological_order(parents: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &c in &children[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Cycles closed by back edges of a depth-first search along parent -> child
/// edges. Each returned cycle lists its nodes in edge order.
fn find_cycles(parents: &[Vec<usize>]) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }

    let mut mark = vec![Mark::New; n];
    let mut cycles = Vec::new();
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // (node, next child position)
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Open;
        while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
            if let Some(&next) = children[node].get(*pos) {
                *pos += 1;
                match mark[next] {
                    Mark::New => {
                        mark[next] = Mark::Open;
                        stack.push((next, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(v, _)| v == next).unwrap();
                        cycles.push(stack[start..].iter().map(|&(v, _)| v).collect());
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    cycles
}
