//! Prints the CPT of one drift-factor node for the default level weights.
//!
//! ```text
//! cargo run --example drift_cpt
//! ```

use driftnet::maturity::{drift_cpt_from_weights, AggregationWeights};

fn main() -> driftnet::Result<()> {
    let w = AggregationWeights::expert_default();
    let cpt = drift_cpt_from_weights(&w)?;
    println!("LV1 LV2 LV3 LV4 LV5   P(True)  P(False)");
    for (i, row) in cpt.rows().iter().enumerate() {
        let bits: Vec<&str> = (0..5).rev().map(|b| if i >> b & 1 == 1 { "Y  " } else { "N  " }).collect();
        println!("{} {:>8.2} {:>9.2}", bits.join(" "), row[0], row[1]);
    }
    Ok(())
}
