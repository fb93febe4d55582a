//! Decision-support queries over an assembled drift network.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::posterior;
use crate::learning::OvercostBand;
use crate::maturity::{assessment_to_evidence, Answer, Assessment, DriftNetwork, MaturityFramework, NO, OVERCOST, TRUE, YES};
use crate::network::{Distribution, Evidence};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftRisk {
    pub drift_id: String,
    /// `P(Drift = True)`
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhatIfResult {
    pub overcost: Distribution,
    pub drift_risks: Vec<DriftRisk>,
    pub evidence_echo: Evidence,
}

/// Overcost and drift posteriors under the evidence of an assessment.
///
/// Answers on questions that have no node in this network carry no
/// information and are left out of the evidence.
pub fn what_if(net: &DriftNetwork, fw: &MaturityFramework, a: &Assessment) -> Result<WhatIfResult> {
    let evidence = network_evidence(net, fw, a)?;
    evaluate(net, evidence)
}

fn network_evidence(net: &DriftNetwork, fw: &MaturityFramework, a: &Assessment) -> Result<Evidence> {
    let all = assessment_to_evidence(fw, a)?;
    Ok(all.iter().filter(|(k, _)| net.has_maturity_node(k)).collect())
}

fn evaluate(net: &DriftNetwork, evidence: Evidence) -> Result<WhatIfResult> {
    let overcost = posterior(net.network(), OVERCOST, &evidence)?;
    let drift_risks = net
        .drift_ids()
        .iter()
        .map(|d| {
            let p = posterior(net.network(), d, &evidence)?;
            Ok(DriftRisk { drift_id: d.clone(), probability: p.probability(TRUE).unwrap() })
        })
        .collect::<Result<_>>()?;
    Ok(WhatIfResult { overcost, drift_risks, evidence_echo: evidence })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Level `k` means every level up to `k` is reached.
    #[default]
    Cumulative,
    /// Level `k` means only level `k` is reached.
    Exclusive,
}

impl std::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cumulative" => Ok(SweepMode::Cumulative),
            "exclusive" => Ok(SweepMode::Exclusive),
            other => Err(Error::input(format!("unknown sweep mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub level: u8,
    pub overcost: Distribution,
    pub drift_risks: Vec<DriftRisk>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub mode: SweepMode,
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: &str = "level,p_1,p_1_10,p_10_100,p_100";

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.level.to_string());
            for p in &row.overcost.probabilities {
                out.push(',');
                out.push_str(&p.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parses the CSV written by [`SweepTable::to_csv`] into `(level, bands)`.
    pub fn parse_csv(text: &str) -> Result<Vec<(u8, [f64; 4])>> {
        let mut lines = text.lines();
        if lines.next() != Some(SWEEP_CSV_HEADER) {
            return Err(Error::format("sweep", format!("header must be `{SWEEP_CSV_HEADER}`")));
        }
        lines
            .enumerate()
            .map(|(i, line)| {
                let bad = || Error::format("sweep", format!("line {}: malformed row `{line}`", i + 2));
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 5 {
                    return Err(bad());
                }
                let level = fields[0].parse().map_err(|_| bad())?;
                let mut p = [0.0; 4];
                for (slot, f) in p.iter_mut().zip(&fields[1..]) {
                    *slot = f.parse().map_err(|_| bad())?;
                }
                Ok((level, p))
            })
            .collect()
    }
}

impl fmt::Display for SweepTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>5}", "level")?;
        for b in OvercostBand::ALL {
            write!(f, " {:>9}", b.label())?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(f, "{:>5}", row.level)?;
            for p in &row.overcost.probabilities {
                write!(f, " {:>8.2}%", p * 100.0)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Overcost distribution with every maturity node clamped per level `k`,
/// for `k = 0` (nothing reached) through the highest level in the network.
pub fn maturity_sweep(net: &DriftNetwork, mode: SweepMode) -> Result<SweepTable> {
    let top = net.maturity_nodes().map(|(_, k)| k.level).max().unwrap_or(0);
    let rows = (0..=top)
        .map(|k| {
            let evidence: Evidence = net
                .maturity_nodes()
                .map(|(id, key)| {
                    let reached = match mode {
                        SweepMode::Cumulative => key.level <= k,
                        SweepMode::Exclusive => key.level == k,
                    };
                    (id, if reached { YES } else { NO })
                })
                .collect();
            let r = evaluate(net, evidence)?;
            Ok(SweepRow { level: k, overcost: r.overcost, drift_risks: r.drift_risks })
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable { mode, rows })
}

/// `P(P_10_100) + P(P_100)`, the tail risk used to rank actions.
pub fn tail_risk(overcost: &Distribution) -> f64 {
    overcost.probability(OvercostBand::P10To100.label()).unwrap_or(0.0)
        + overcost.probability(OvercostBand::P100.label()).unwrap_or(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedAction {
    pub question: String,
    /// Decrease in tail risk when the question flips to `Yes`.
    pub delta: f64,
}

/// Every question of the network not yet answered `Yes`, with the tail-risk
/// decrease obtained by answering it `Yes`, largest decrease first. Equal
/// decreases (to 1e-12) are ordered by question key.
pub fn rank_actions(net: &DriftNetwork, fw: &MaturityFramework, a: &Assessment) -> Result<Vec<RankedAction>> {
    let base_evidence = network_evidence(net, fw, a)?;
    let base = tail_risk(&posterior(net.network(), OVERCOST, &base_evidence)?);

    let mut ranked = Vec::new();
    for (id, key) in net.maturity_nodes() {
        if a.get(key) == Some(Answer::Yes) {
            continue;
        }
        let mut evidence = base_evidence.clone();
        evidence.insert(id, YES);
        let flipped = match posterior(net.network(), OVERCOST, &evidence) {
            Ok(d) => tail_risk(&d),
            Err(Error::ImpossibleEvidence) => continue,
            Err(e) => return Err(e),
        };
        ranked.push(RankedAction { question: id.to_string(), delta: base - flipped });
    }
    ranked.sort_by(|x, y| {
        let qx = (x.delta * 1e12).round();
        let qy = (y.delta * 1e12).round();
        qy.total_cmp(&qx).then_with(|| x.question.cmp(&y.question))
    });
    Ok(ranked)
}
