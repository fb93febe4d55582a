//! Seeded generator of overcost event files drawn from a planted naive-Bayes
//! model.
//!
//! Each event draws a band from the planted prior, then one drift with
//! probability proportional to the planted `P(present | band)` column, then a
//! loss percentage uniformly inside the band's configured range. Projects are
//! assigned round-robin so every project id appears.

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bin_overcost, DriftConditional, EventRecord, Granularity, NaiveBayesModel, OvercostBand};
use crate::error::{Error, Result};
use crate::maturity::DriftFactorSpec;

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_PROJECTS: usize = 15;
pub const DEFAULT_EVENTS: usize = 459;

const BUNDLED_EVENTS: &str = include_str!("../../data/synthetic_events.csv");

/// Loss percentage range `[lower, upper)` sampled for each band.
#[derive(Clone, Debug, PartialEq)]
pub struct BandRanges(pub [(f64, f64); 4]);

impl Default for BandRanges {
    fn default() -> Self {
        BandRanges([(0.0, 1.0), (1.0, 10.0), (10.0, 100.0), (100.0, 250.0)])
    }
}

impl BandRanges {
    fn check(&self) -> Result<()> {
        for (band, &(lo, hi)) in OvercostBand::ALL.iter().zip(&self.0) {
            let (blo, bhi) = band.bounds();
            if !(lo < hi && lo >= blo && hi <= bhi && hi.is_finite()) {
                return Err(Error::input(format!("range [{lo}, {hi}) does not fit band {band}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub n_projects: usize,
    pub n_events: usize,
    pub ranges: BandRanges,
    /// Supplies drift labels for event descriptions.
    pub catalogue: Vec<DriftFactorSpec>,
}

impl SyntheticConfig {
    pub fn new(catalogue: Vec<DriftFactorSpec>) -> Self {
        SyntheticConfig {
            seed: DEFAULT_SEED,
            n_projects: DEFAULT_PROJECTS,
            n_events: DEFAULT_EVENTS,
            ranges: BandRanges::default(),
            catalogue,
        }
    }
}

pub fn generate_synthetic_events(cfg: &SyntheticConfig, planted: &NaiveBayesModel) -> Result<Vec<EventRecord>> {
    if cfg.n_events == 0 || cfg.n_projects == 0 {
        return Err(Error::input("need at least one event and one project"));
    }
    cfg.ranges.check()?;
    if planted.conditionals.is_empty() {
        return Err(Error::input("planted model has no drifts"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let width = cfg.n_projects.to_string().len().max(2);
    let projects: Vec<(String, f64)> = (0..cfg.n_projects)
        .map(|i| {
            let cost = rng.gen_range(20_000_000u64..=400_000_000) as f64;
            (format!("P{:0width$}", i + 1), cost)
        })
        .collect();

    let bands = WeightedIndex::new(planted.prior_values())
        .map_err(|e| Error::input(format!("planted prior: {e}")))?;
    let per_band: Vec<Option<WeightedIndex<f64>>> = (0..4)
        .map(|b| WeightedIndex::new(planted.conditionals.iter().map(|c| c.present[b])).ok())
        .collect();

    let mut out = Vec::with_capacity(cfg.n_events);
    for i in 0..cfg.n_events {
        let band = bands.sample(&mut rng);
        let drift = match &per_band[band] {
            Some(w) => w.sample(&mut rng),
            None => rng.gen_range(0..planted.conditionals.len()),
        };
        let drift_id = &planted.conditionals[drift].drift_id;
        let (lo, hi) = cfg.ranges.0[band];
        // keep a margin from the range ends so integer rounding cannot change the band
        let margin = if lo == 0.0 { 0.0 } else { (hi - lo) * 1e-3 };
        let pct = rng.gen_range(lo + margin..hi - (hi - lo) * 1e-3);
        let (project_id, cost) = &projects[i % cfg.n_projects];
        let loss = (pct / 100.0 * cost).round();
        debug_assert_eq!(bin_overcost(100.0 * loss / cost).unwrap().index(), band);

        let description = cfg
            .catalogue
            .iter()
            .find(|d| &d.id == drift_id)
            .map_or_else(|| format!("drift {drift_id}"), |d| d.label.clone());
        out.push(EventRecord {
            project_id: project_id.clone(),
            description,
            drift_id: drift_id.clone(),
            loss,
            project_cost: *cost,
        });
    }
    Ok(out)
}

/// Planted model used for the bundled event file.
///
/// Low-loss bands concentrate their events on a few drifts while the highest
/// band spreads over all of them, so the learned model associates many
/// simultaneous drifts with large overruns.
pub fn default_planted_model(drift_ids: &[String]) -> NaiveBayesModel {
    let n = drift_ids.len();
    // (number of concentrated drifts, mass on them, rotation offset)
    let shape = [(2usize, 0.9, 3usize), (4, 0.8, 7), (8, 0.8, 1), (n, 1.0, 0)];
    let mut present = vec![[0.0; 4]; n];
    for (b, &(hot, mass, offset)) in shape.iter().enumerate() {
        let hot = hot.min(n);
        let cold = n - hot;
        for k in 0..n {
            let rank = (k + n - offset % n.max(1)) % n.max(1);
            present[k][b] = if rank < hot {
                mass / hot as f64
            } else {
                (1.0 - mass) / cold as f64
            };
        }
    }
    let conditionals = drift_ids
        .iter()
        .zip(present)
        .map(|(d, p)| DriftConditional { drift_id: d.clone(), present: p })
        .collect();
    NaiveBayesModel::new([0.15, 0.20, 0.30, 0.35], conditionals, 0.0, Granularity::Event)
        .expect("planted model is valid")
}

/// The bundled 459-event file generated with [`DEFAULT_SEED`].
pub fn bundled_events_csv() -> &'static str {
    BUNDLED_EVENTS
}
