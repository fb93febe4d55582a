//! Answers a few maturity questions and shows how the overcost and drift
//! posteriors move, then ranks the questions that would most reduce the risk
//! of losing more than 10% of project cost.
//!
//! ```text
//! cargo run --release --example what_if
//! ```

use driftnet::learning::synthetic::bundled_events_csv;
use driftnet::learning::{compile_target_cpt, ingest_events_from_reader, learn_naive_bayes, Granularity};
use driftnet::maturity::{build_network, Answer, Assessment, FrameworkConfig, QuestionKey};
use driftnet::simulation::{rank_actions, tail_risk, what_if};

fn main() -> driftnet::Result<()> {
    let cfg = FrameworkConfig::bundled();
    let ids = cfg.drift_ids();
    let events = ingest_events_from_reader(bundled_events_csv().as_bytes(), Some(&ids))?.records;
    let model = learn_naive_bayes(&events, &ids, 1.0, Granularity::Event)?;
    let net = build_network(&cfg.framework, &cfg.drift_factors, &cfg.weights, compile_target_cpt(&model, &ids)?)?;
    let fw = &cfg.framework;

    let blank = Assessment::new();
    let mut a = Assessment::new();
    for key in ["PR.Interface.LV1", "PR.Interface.LV2", "MR.Contract.LV1", "MA.Results.LV3"] {
        a.set(&key.parse::<QuestionKey>()?, Answer::Yes);
    }
    a.set(&"MF.Results.LV1".parse::<QuestionKey>()?, Answer::No);

    for (name, assessment) in [("no answers", &blank), ("partial assessment", &a)] {
        let r = what_if(&net, fw, assessment)?;
        println!("{name}");
        println!("  overcost   {}", r.overcost);
        println!("  P(>10%)    {:.4}", tail_risk(&r.overcost));
        for d in &r.drift_risks {
            println!("  drift {:<4} {:.3}", d.drift_id, d.probability);
        }
    }

    println!("\nbest next answers");
    for action in rank_actions(&net, fw, &a)?.iter().take(5) {
        println!("  {:<18} -{:.4}", action.question, action.delta);
    }
    Ok(())
}
