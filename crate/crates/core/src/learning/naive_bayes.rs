use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{bin_overcost, normalize_loss, EventRecord, OvercostBand};
use crate::error::{Error, Result};
use crate::maturity::OVERCOST;
use crate::network::{config_states, Cpt, Distribution};

const BANDS: usize = 4;

/// What counts as one training instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    /// One instance per event; its only present drift is the event's own.
    #[default]
    Event,
    /// One instance per project; present drifts are those seen in any of its
    /// events and the class is the band of the summed loss.
    Project,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftConditional {
    pub drift_id: String,
    /// `P(drift present | band)` in band order.
    pub present: [f64; BANDS],
}

/// Class prior over the overcost bands and per-drift presence likelihoods.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    pub prior: Distribution,
    pub conditionals: Vec<DriftConditional>,
    pub alpha: f64,
    pub granularity: Granularity,
    pub instances: usize,
}

impl NaiveBayesModel {
    /// Builds a model from raw parts, checking ranges.
    pub fn new(prior: [f64; BANDS], conditionals: Vec<DriftConditional>, alpha: f64, granularity: Granularity) -> Result<Self> {
        let sum: f64 = prior.iter().sum();
        if prior.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::input(format!("prior {prior:?} is not a distribution")));
        }
        for c in &conditionals {
            if c.present.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::input(format!("conditional for `{}` outside [0, 1]", c.drift_id)));
            }
        }
        Ok(NaiveBayesModel { prior: band_distribution(prior.to_vec()), conditionals, alpha, granularity, instances: 0 })
    }

    pub fn prior_values(&self) -> [f64; BANDS] {
        let p = &self.prior.probabilities;
        [p[0], p[1], p[2], p[3]]
    }

    pub fn conditional(&self, drift_id: &str) -> Option<&[f64; BANDS]> {
        self.conditionals.iter().find(|c| c.drift_id == drift_id).map(|c| &c.present)
    }

    pub fn drift_ids(&self) -> Vec<String> {
        self.conditionals.iter().map(|c| c.drift_id.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path.display(), e.to_string()))
    }

    /// Largest absolute difference in prior or conditionals over the drifts of `self`.
    pub fn max_abs_diff(&self, other: &NaiveBayesModel) -> f64 {
        let mut worst = self.prior.max_abs_diff(&other.prior);
        for c in &self.conditionals {
            let Some(o) = other.conditional(&c.drift_id) else { return f64::INFINITY };
            for b in 0..BANDS {
                worst = worst.max((c.present[b] - o[b]).abs());
            }
        }
        worst
    }
}

fn band_distribution(probabilities: Vec<f64>) -> Distribution {
    Distribution {
        variable: OVERCOST.to_string(),
        states: OvercostBand::ALL.iter().map(|b| b.label().to_string()).collect(),
        probabilities,
    }
}

/// Laplace-smoothed naive Bayes: `P(band) = (n_b + α) / (N + 4α)` and
/// `P(present | band) = (n_{d,b} + α) / (n_b + 2α)`. A band with no instances
/// and `α = 0` gets uninformative conditionals of 0.5.
pub fn learn_naive_bayes(
    records: &[EventRecord],
    catalogue: &[String],
    alpha: f64,
    granularity: Granularity,
) -> Result<NaiveBayesModel> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::input(format!("pseudo-count {alpha} must be a finite non-negative number")));
    }
    if records.is_empty() && alpha == 0.0 {
        return Err(Error::DegenerateData("no records and no smoothing".into()));
    }
    let known: BTreeSet<&str> = catalogue.iter().map(String::as_str).collect();
    if let Some(r) = records.iter().find(|r| !known.contains(r.drift_id.as_str())) {
        return Err(Error::input(format!("event drift `{}` is not in the catalogue", r.drift_id)));
    }

    let instances = training_instances(records, granularity)?;

    let mut class_counts = [0usize; BANDS];
    let mut feature_counts: BTreeMap<&str, [usize; BANDS]> =
        catalogue.iter().map(|d| (d.as_str(), [0; BANDS])).collect();
    for (band, present) in &instances {
        class_counts[band.index()] += 1;
        for d in present {
            feature_counts.get_mut(d.as_str()).expect("checked")[band.index()] += 1;
        }
    }

    let n = instances.len() as f64;
    let prior: Vec<f64> = class_counts
        .iter()
        .map(|&c| (c as f64 + alpha) / (n + BANDS as f64 * alpha))
        .collect();
    let conditionals = catalogue
        .iter()
        .map(|d| {
            let counts = feature_counts[d.as_str()];
            let mut present = [0.0; BANDS];
            for b in 0..BANDS {
                let denom = class_counts[b] as f64 + 2.0 * alpha;
                present[b] = if denom > 0.0 { (counts[b] as f64 + alpha) / denom } else { 0.5 };
            }
            DriftConditional { drift_id: d.clone(), present }
        })
        .collect();

    Ok(NaiveBayesModel {
        prior: band_distribution(prior),
        conditionals,
        alpha,
        granularity,
        instances: instances.len(),
    })
}

fn training_instances(
    records: &[EventRecord],
    granularity: Granularity,
) -> Result<Vec<(OvercostBand, BTreeSet<String>)>> {
    match granularity {
        Granularity::Event => records
            .iter()
            .map(|r| Ok((bin_overcost(normalize_loss(r))?, BTreeSet::from([r.drift_id.clone()]))))
            .collect(),
        Granularity::Project => {
            let mut projects: BTreeMap<&str, (f64, f64, BTreeSet<String>)> = BTreeMap::new();
            for r in records {
                let entry = projects
                    .entry(r.project_id.as_str())
                    .or_insert_with(|| (0.0, r.project_cost, BTreeSet::new()));
                if entry.1 != r.project_cost {
                    log::warn!(
                        "project {} lists costs {} and {}; using the first",
                        r.project_id,
                        entry.1,
                        r.project_cost
                    );
                }
                entry.0 += r.loss;
                entry.2.insert(r.drift_id.clone());
            }
            projects
                .into_values()
                .map(|(loss, cost, drifts)| Ok((bin_overcost(100.0 * loss / cost)?, drifts)))
                .collect()
        }
    }
}

/// Band posterior for one full drift configuration (`true` = present).
pub fn naive_bayes_posterior(m: &NaiveBayesModel, drift_ids: &[String], present: &[bool]) -> Result<[f64; BANDS]> {
    let conds: Vec<&[f64; BANDS]> = drift_ids
        .iter()
        .map(|d| m.conditional(d).ok_or_else(|| Error::input(format!("model has no drift `{d}`"))))
        .collect::<Result<_>>()?;
    let prior = m.prior_values();
    let mut row = [0.0; BANDS];
    for b in 0..BANDS {
        row[b] = conds
            .iter()
            .zip(present)
            .fold(prior[b], |acc, (c, &on)| acc * if on { c[b] } else { 1.0 - c[b] });
    }
    let total: f64 = row.iter().sum();
    if total > 0.0 {
        row.iter_mut().for_each(|p| *p /= total);
        Ok(row)
    } else {
        Ok(prior)
    }
}

/// The overcost CPT with the drift factors as parents: each row is the
/// naive-Bayes band posterior for that drift configuration. Drift state 0
/// (`True`) means present. A configuration of probability zero under every
/// band falls back to the prior.
pub fn compile_target_cpt(m: &NaiveBayesModel, drift_ids: &[String]) -> Result<Cpt> {
    if drift_ids.len() >= usize::BITS as usize - 2 {
        return Err(Error::input(format!("{} drift parents is too many for a dense CPT", drift_ids.len())));
    }
    for d in drift_ids {
        if m.conditional(d).is_none() {
            return Err(Error::input(format!("model has no drift `{d}`")));
        }
    }
    let cards = vec![2; drift_ids.len()];
    let mut present = vec![false; drift_ids.len()];
    let rows = (0..1usize << drift_ids.len())
        .map(|r| {
            for (slot, s) in present.iter_mut().zip(config_states(r, &cards)) {
                *slot = s == 0;
            }
            naive_bayes_posterior(m, drift_ids, &present).map(|row| row.to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cpt::new(OVERCOST, drift_ids.to_vec(), rows))
}
