use crate::error::{Error, Result};
use crate::network::{Cpt, Evidence, Network, Variable};

/// A non-negative table over an ordered scope of variables, indexed by
/// mixed-radix enumeration of the scope states with the last variable fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<Variable>,
    values: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<Variable>, values: Vec<f64>) -> Result<Self> {
        for (i, v) in scope.iter().enumerate() {
            if scope[..i].iter().any(|w| w.id() == v.id()) {
                return Err(Error::input(format!("variable `{}` appears twice in scope", v.id())));
            }
        }
        let size: usize = scope.iter().map(Variable::cardinality).product();
        if values.len() != size {
            return Err(Error::input(format!(
                "factor over {} states holds {} values",
                size,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::input(format!("factor value {bad} is not a finite non-negative number")));
        }
        Ok(Factor { scope, values })
    }

    /// Scalar factor with empty scope.
    pub fn scalar(value: f64) -> Self {
        Factor { scope: Vec::new(), values: vec![value] }
    }

    pub fn scope(&self) -> &[Variable] {
        &self.scope
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.position(id).is_some()
    }

    fn position(&self, id: &str) -> Option<usize> {
        self.scope.iter().position(|v| v.id() == id)
    }

    fn cards(&self) -> Vec<usize> {
        self.scope.iter().map(Variable::cardinality).collect()
    }

    /// Value at the given per-scope state indices.
    pub fn get(&self, states: &[usize]) -> f64 {
        self.values[crate::network::config_index(states, &self.cards())]
    }

    /// The CPT of `child` as a factor over `parents ++ [child]`.
    pub(crate) fn from_cpt(net: &Network, cpt: &Cpt) -> Self {
        let mut scope: Vec<Variable> = cpt
            .parents()
            .iter()
            .map(|p| net.variable(p).expect("validated parent").clone())
            .collect();
        scope.push(net.variable(cpt.child()).expect("validated child").clone());
        let values = cpt.rows().iter().flatten().copied().collect();
        Factor { scope, values }
    }
}

/// Strides of `scope` variables inside `within`, zero where absent.
fn strides_in(scope: &[Variable], within: &[Variable]) -> Vec<usize> {
    let mut strides = vec![0; scope.len()];
    let mut stride = 1;
    for w in within.iter().rev() {
        if let Some(k) = scope.iter().position(|v| v.id() == w.id()) {
            strides[k] = stride;
        }
        stride *= w.cardinality();
    }
    strides
}

/// Walks every configuration of `cards` (last fastest) while tracking linear
/// offsets into other tables through per-variable strides.
fn for_each_config(cards: &[usize], strides: &[&[usize]], mut f: impl FnMut(usize, &[usize])) {
    let n = cards.len();
    let mut states = vec![0usize; n];
    let mut offsets = vec![0usize; strides.len()];
    let total: usize = cards.iter().product();
    for linear in 0..total {
        f(linear, &offsets);
        for k in (0..n).rev() {
            states[k] += 1;
            for (o, s) in offsets.iter_mut().zip(strides) {
                *o += s[k];
            }
            if states[k] < cards[k] {
                break;
            }
            for (o, s) in offsets.iter_mut().zip(strides) {
                *o -= s[k] * cards[k];
            }
            states[k] = 0;
        }
    }
}

/// Pointwise product over the union of both scopes (`a`'s variables first).
pub fn factor_product(a: &Factor, b: &Factor) -> Result<Factor> {
    let mut scope = a.scope.clone();
    for v in &b.scope {
        match a.position(v.id()) {
            Some(k) if a.scope[k].states() != v.states() => {
                return Err(Error::input(format!("state lists of `{}` disagree", v.id())));
            }
            Some(_) => {}
            None => scope.push(v.clone()),
        }
    }
    let cards: Vec<usize> = scope.iter().map(Variable::cardinality).collect();
    let sa = strides_in(&scope, &a.scope);
    let sb = strides_in(&scope, &b.scope);
    let mut values = vec![0.0; cards.iter().product()];
    for_each_config(&cards, &[&sa, &sb], |i, off| {
        values[i] = a.values[off[0]] * b.values[off[1]];
    });
    Ok(Factor { scope, values })
}

/// Sums `variable` out of `f`.
pub fn factor_marginalize(f: &Factor, variable: &str) -> Result<Factor> {
    let k = f
        .position(variable)
        .ok_or_else(|| Error::input(format!("`{variable}` is not in the factor scope")))?;
    let mut scope = f.scope.clone();
    scope.remove(k);
    let cards = f.cards();
    let out_strides = strides_in(&f.scope, &scope);
    let mut values = vec![0.0; scope.iter().map(Variable::cardinality).product()];
    for_each_config(&cards, &[&out_strides], |i, off| {
        values[off[0]] += f.values[i];
    });
    Ok(Factor { scope, values })
}

/// Keeps only entries consistent with the evidence and drops the bound
/// variables from the scope. Bindings on variables outside the scope are ignored.
pub fn factor_reduce(f: &Factor, evidence: &Evidence) -> Result<Factor> {
    let mut fixed: Vec<Option<usize>> = vec![None; f.scope.len()];
    for (k, v) in f.scope.iter().enumerate() {
        if let Some(state) = evidence.get(v.id()) {
            let s = v.state_index(state).ok_or_else(|| Error::UnknownState {
                variable: v.id().to_string(),
                state: state.to_string(),
            })?;
            fixed[k] = Some(s);
        }
    }
    Ok(reduce_indexed(f, &fixed))
}

pub(crate) fn reduce_indexed(f: &Factor, fixed: &[Option<usize>]) -> Factor {
    if fixed.iter().all(Option::is_none) {
        return f.clone();
    }
    let in_strides = {
        let mut s = vec![0; f.scope.len()];
        let mut stride = 1;
        for k in (0..f.scope.len()).rev() {
            s[k] = stride;
            stride *= f.scope[k].cardinality();
        }
        s
    };
    let base: usize = fixed
        .iter()
        .zip(&in_strides)
        .map(|(s, st)| s.map_or(0, |s| s * st))
        .sum();
    let keep: Vec<usize> = (0..f.scope.len()).filter(|&k| fixed[k].is_none()).collect();
    let scope: Vec<Variable> = keep.iter().map(|&k| f.scope[k].clone()).collect();
    let cards: Vec<usize> = scope.iter().map(Variable::cardinality).collect();
    let strides: Vec<usize> = keep.iter().map(|&k| in_strides[k]).collect();
    let mut values = vec![0.0; cards.iter().product()];
    for_each_config(&cards, &[&strides], |i, off| {
        values[i] = f.values[base + off[0]];
    });
    Factor { scope, values }
}
