//! Learns the naive-Bayes overcost model from the bundled synthetic events and
//! prints the prior and per-drift conditionals.
//!
//! ```text
//! cargo run --example learn_overcost [-- ALPHA]
//! ```

use driftnet::learning::synthetic::bundled_events_csv;
use driftnet::learning::{ingest_events_from_reader, learn_naive_bayes, Granularity, OvercostBand};
use driftnet::maturity::FrameworkConfig;

fn main() -> driftnet::Result<()> {
    let alpha: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let cfg = FrameworkConfig::bundled();
    let ids = cfg.drift_ids();
    let ingested = ingest_events_from_reader(bundled_events_csv().as_bytes(), Some(&ids))?;
    eprint!("{}", ingested.rejects_report());

    for granularity in [Granularity::Event, Granularity::Project] {
        let m = learn_naive_bayes(&ingested.records, &ids, alpha, granularity)?;
        println!("{granularity:?} granularity, alpha {alpha}, {} instances", m.instances);
        let header: Vec<&str> = OvercostBand::ALL.iter().map(|b| b.label()).collect();
        println!("  {:<8} {}", "", header.iter().map(|h| format!("{h:>9}")).collect::<String>());
        let prior = m.prior_values();
        println!("  {:<8} {}", "prior", prior.iter().map(|p| format!("{p:>9.3}")).collect::<String>());
        for id in &ids {
            let c = m.conditional(id).expect("catalogued drift");
            println!("  {:<8} {}", id, c.iter().map(|p| format!("{p:>9.3}")).collect::<String>());
        }
        println!();
    }
    Ok(())
}
