//! Serves the HTTP API over the network built from the bundled data.
//!
//! ```text
//! cargo run --release --example serve
//! curl localhost:8348/sweep
//! curl -X POST localhost:8348/whatif -d '{"answers":{"PR.Interface.LV1":"Yes"}}'
//! ```

use std::net::SocketAddr;

use driftnet::cli::build_from;
use driftnet::learning::synthetic::bundled_events_csv;
use driftnet::learning::{ingest_events_from_reader, learn_naive_bayes, Granularity};
use driftnet::maturity::FrameworkConfig;
use driftnet::server::{serve, AppState, Provenance, DEFAULT_PORT};

#[tokio::main]
async fn main() -> driftnet::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DRIFTNET_LOG", "info")).init();
    let cfg = FrameworkConfig::bundled();
    let ids = cfg.drift_ids();
    let events = ingest_events_from_reader(bundled_events_csv().as_bytes(), Some(&ids))?.records;
    let model = learn_naive_bayes(&events, &ids, 1.0, Granularity::Event)?;

    let mut prov = Provenance::default();
    prov.record_file("framework", FrameworkConfig::bundled_text().as_bytes());
    prov.record_file("events", bundled_events_csv().as_bytes());
    prov.record_model(&model);

    let state = AppState::new(build_from(&cfg, &model)?, cfg, prov)?;
    serve(state, SocketAddr::from(([127, 0, 0, 1], DEFAULT_PORT)), &["*".to_string()]).await
}
