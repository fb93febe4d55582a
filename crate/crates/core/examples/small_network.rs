//! Builds a three-node network by hand and compares variable elimination with
//! full enumeration.
//!
//! ```text
//! cargo run --example small_network
//! ```

use driftnet::inference::{elimination_order, posterior};
use driftnet::network::{brute_force_posterior, Cpt, Evidence, Network, Variable};

fn main() -> driftnet::Result<()> {
    // X -> Z <- Y
    let net = Network::new(
        vec![Variable::binary("X"), Variable::binary("Y"), Variable::binary("Z")],
        vec![
            Cpt::prior("X", vec![0.3, 0.7]),
            Cpt::prior("Y", vec![0.6, 0.4]),
            Cpt::new(
                "Z",
                vec!["X".into(), "Y".into()],
                vec![vec![0.95, 0.05], vec![0.7, 0.3], vec![0.4, 0.6], vec![0.02, 0.98]],
            ),
        ],
    )?;

    for evidence in [
        Evidence::new(),
        Evidence::new().with("Z", "T"),
        Evidence::new().with("Z", "T").with("Y", "T"),
    ] {
        let plan = elimination_order(&net, "X", &evidence)?;
        let ve = posterior(&net, "X", &evidence)?;
        let bf = brute_force_posterior(&net, "X", &evidence)?;
        println!("evidence {:?}", evidence.iter().collect::<Vec<_>>());
        println!("  order        {:?}", plan.order);
        println!("  elimination  {ve}");
        println!("  enumeration  {bf}");
        println!("  max diff     {:.2e}", ve.max_abs_diff(&bf));
    }
    Ok(())
}
