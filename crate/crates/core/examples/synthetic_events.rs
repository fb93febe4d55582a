//! Generates synthetic overcost events from the planted model, learns from
//! them, and reports how close the learned parameters come to the planted
//! ones as the sample grows.
//!
//! ```text
//! cargo run --release --example synthetic_events
//! ```

use driftnet::learning::synthetic::{default_planted_model, generate_synthetic_events, SyntheticConfig};
use driftnet::learning::{learn_naive_bayes, Granularity};
use driftnet::maturity::FrameworkConfig;

fn main() -> driftnet::Result<()> {
    let cfg = FrameworkConfig::bundled();
    let ids = cfg.drift_ids();
    let planted = default_planted_model(&ids);
    println!("{:>8}  {:>10}", "events", "max |diff|");
    for n in [459, 2_000, 10_000, 50_000] {
        let syn = SyntheticConfig { n_events: n, ..SyntheticConfig::new(cfg.drift_factors.clone()) };
        let events = generate_synthetic_events(&syn, &planted)?;
        let learned = learn_naive_bayes(&events, &ids, 1.0, Granularity::Event)?;
        println!("{n:>8}  {:>10.4}", learned.max_abs_diff(&planted));
    }
    Ok(())
}
