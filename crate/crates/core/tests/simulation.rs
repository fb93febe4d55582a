mod common;

use common::{bundled_network, linf, oracle_posterior};
use driftnet::learning::{compile_target_cpt, DriftConditional, Granularity, NaiveBayesModel};
use driftnet::maturity::{
    build_network, AggregationWeights, Answer, Assessment, DriftFactorSpec, DriftNetwork, MaturityFramework,
    QuestionKey, DEFAULT_DOMAINS,
};
use driftnet::network::Evidence;
use driftnet::simulation::{maturity_sweep, rank_actions, tail_risk, what_if, SweepMode, SweepTable, SWEEP_CSV_HEADER};
use driftnet::Error;

fn fw() -> MaturityFramework {
    MaturityFramework::with_generic_questions(DEFAULT_DOMAINS.iter().map(|s| s.to_string()).collect(), 3).unwrap()
}

/// Two drifts over three levels each, small enough for the enumeration oracle.
fn small() -> DriftNetwork {
    let drifts = vec![
        DriftFactorSpec { id: "a".into(), label: String::new(), cell: "PA".parse().unwrap(), domain: "Social".into() },
        DriftFactorSpec { id: "b".into(), label: String::new(), cell: "VF".parse().unwrap(), domain: "Results".into() },
    ];
    let m = NaiveBayesModel::new(
        [0.4, 0.3, 0.2, 0.1],
        vec![
            DriftConditional { drift_id: "a".into(), present: [0.1, 0.3, 0.6, 0.8] },
            DriftConditional { drift_id: "b".into(), present: [0.2, 0.2, 0.5, 0.9] },
        ],
        1.0,
        Granularity::Event,
    )
    .unwrap();
    let ids = vec!["a".to_string(), "b".to_string()];
    let w = AggregationWeights::new(vec![0.2, 0.3, 0.5]).unwrap();
    build_network(&fw(), &drifts, &w, compile_target_cpt(&m, &ids).unwrap()).unwrap()
}

fn key(s: &str) -> QuestionKey {
    s.parse().unwrap()
}

#[test]
fn what_if_matches_enumeration() {
    let net = small();
    let a = Assessment::new()
        .answer(&key("PA.Social.LV1"), Answer::Yes)
        .answer(&key("PA.Social.LV3"), Answer::No)
        .answer(&key("VF.Results.LV2"), Answer::Yes);
    let r = what_if(&net, &fw(), &a).unwrap();
    let e: Evidence = a.answers.iter().map(|(k, v)| (k.clone(), v.state())).collect();
    assert_eq!(r.evidence_echo, e);
    let want = oracle_posterior(net.network(), "Overcost", &e);
    assert!(linf(&r.overcost.probabilities, &want) < 1e-12);
    for d in &r.drift_risks {
        let want = oracle_posterior(net.network(), &d.drift_id, &e)[0];
        assert!((d.probability - want).abs() < 1e-12);
    }
}

#[test]
fn drift_risk_under_partial_answers_by_hand() {
    // LV1 Yes, LV3 No, LV2 unknown with prior 0.5: P(F) = 0.2 + 0.5 * 0.3
    let net = small();
    let a = Assessment::new().answer(&key("PA.Social.LV1"), Answer::Yes).answer(&key("PA.Social.LV3"), Answer::No);
    let r = what_if(&net, &fw(), &a).unwrap();
    assert!((r.drift_risks[0].probability - (1.0 - 0.35)).abs() < 1e-12);
}

#[test]
fn answers_outside_the_network_are_ignored() {
    let net = small();
    let base = what_if(&net, &fw(), &Assessment::new()).unwrap();
    let a = Assessment::new().answer(&key("MR.Contract.LV2"), Answer::Yes);
    let r = what_if(&net, &fw(), &a).unwrap();
    assert!(r.evidence_echo.is_empty());
    assert_eq!(r, base);
}

#[test]
fn unknown_questions_are_errors() {
    let net = small();
    let mut a = Assessment::new();
    a.answers.insert("PA.Social.LV9".into(), Answer::Yes);
    assert!(matches!(what_if(&net, &fw(), &a), Err(Error::UnknownQuestion(_))));
    assert!(matches!(rank_actions(&net, &fw(), &a), Err(Error::UnknownQuestion(_))));
}

#[test]
fn sweep_rows_match_enumeration() {
    let net = small();
    for mode in [SweepMode::Cumulative, SweepMode::Exclusive] {
        let t = maturity_sweep(&net, mode).unwrap();
        assert_eq!(t.rows.len(), 4);
        for row in &t.rows {
            let e: Evidence = net
                .maturity_nodes()
                .map(|(id, k)| {
                    let on = if mode == SweepMode::Cumulative { k.level <= row.level } else { k.level == row.level };
                    (id, if on { "Yes" } else { "No" })
                })
                .collect();
            let want = oracle_posterior(net.network(), "Overcost", &e);
            assert!(linf(&row.overcost.probabilities, &want) < 1e-12);
        }
    }
}

#[test]
fn sweep_csv_round_trip() {
    let t = maturity_sweep(&small(), SweepMode::Cumulative).unwrap();
    let csv = t.to_csv();
    assert_eq!(csv.lines().next(), Some(SWEEP_CSV_HEADER));
    let parsed = SweepTable::parse_csv(&csv).unwrap();
    for (row, (level, ps)) in t.rows.iter().zip(&parsed) {
        assert_eq!(row.level, *level);
        assert_eq!(row.overcost.probabilities.as_slice(), ps);
    }
}

#[test]
fn ranking_is_sorted_and_skips_yes_answers() {
    let net = small();
    let a = Assessment::new().answer(&key("PA.Social.LV2"), Answer::Yes).answer(&key("VF.Results.LV1"), Answer::No);
    let ranked = rank_actions(&net, &fw(), &a).unwrap();
    assert_eq!(ranked.len(), 5);
    assert!(ranked.iter().all(|r| r.question != "PA.Social.LV2"));
    assert!(ranked.iter().any(|r| r.question == "VF.Results.LV1"));
    for pair in ranked.windows(2) {
        assert!(pair[0].delta >= pair[1].delta - 1e-12);
    }
    // each delta is the tail-risk drop from flipping that one answer
    let base = tail_risk(&what_if(&net, &fw(), &a).unwrap().overcost);
    for r in &ranked {
        let mut b = a.clone();
        b.set(&key(&r.question), Answer::Yes);
        let flipped = tail_risk(&what_if(&net, &fw(), &b).unwrap().overcost);
        assert!((base - flipped - r.delta).abs() < 1e-12);
    }
}

#[test]
fn bundled_cumulative_sweep_lowers_extreme_overcost() {
    let (_, net) = bundled_network();
    let t = maturity_sweep(&net, SweepMode::Cumulative).unwrap();
    assert_eq!(t.rows.len(), 6);
    let p100 = |k: usize| t.rows[k].overcost.probabilities[3];
    assert!(p100(5) < p100(1));
    for pair in t.rows.windows(2) {
        for (lo, hi) in pair[0].drift_risks.iter().zip(&pair[1].drift_risks) {
            assert!(hi.probability <= lo.probability + 1e-12, "{} {}", lo.drift_id, pair[1].level);
        }
    }
    for row in &t.rows {
        assert!((row.overcost.total() - 1.0).abs() < 1e-9);
    }
}
