//! Assembles the full network from the bundled framework and synthetic events,
//! then tabulates the overcost distribution as maturity rises level by level.
//!
//! ```text
//! cargo run --release --example maturity_sweep [-- exclusive]
//! ```

use driftnet::learning::synthetic::bundled_events_csv;
use driftnet::learning::{compile_target_cpt, ingest_events_from_reader, learn_naive_bayes, Granularity};
use driftnet::maturity::{build_network, FrameworkConfig};
use driftnet::simulation::{maturity_sweep, SweepMode};

fn main() -> driftnet::Result<()> {
    let mode: SweepMode = std::env::args().nth(1).as_deref().unwrap_or("cumulative").parse()?;
    let cfg = FrameworkConfig::bundled();
    let ids = cfg.drift_ids();
    let events = ingest_events_from_reader(bundled_events_csv().as_bytes(), Some(&ids))?.records;
    let model = learn_naive_bayes(&events, &ids, 1.0, Granularity::Event)?;
    let target = compile_target_cpt(&model, &ids)?;
    let net = build_network(&cfg.framework, &cfg.drift_factors, &cfg.weights, target)?;
    println!(
        "{} nodes, {} drift factors, {mode:?} sweep",
        net.network().len(),
        net.drift_ids().len()
    );
    print!("{}", maturity_sweep(&net, mode)?);
    Ok(())
}
