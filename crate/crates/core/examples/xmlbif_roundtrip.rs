//! Writes the drift-node demo network as XMLBIF, reads it back and checks
//! that nothing changed.
//!
//! ```text
//! cargo run --example xmlbif_roundtrip
//! ```

use driftnet::network::{xmlbif, Network, NetworkDocument};

const DEMO: &str = include_str!("../data/drift_demo.json");

fn main() -> driftnet::Result<()> {
    let net: Network = NetworkDocument::from_json(DEMO)?.into_network()?;
    let xml = xmlbif::to_xmlbif(&net, "drift-demo");
    println!("{}", xml.lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("...");
    let back = xmlbif::from_xmlbif(&xml)?.into_network()?;
    assert_eq!(NetworkDocument::from_network(&back), NetworkDocument::from_network(&net));
    println!("round trip preserved {} variables and {} CPTs", back.len(), back.cpts().len());
    Ok(())
}
