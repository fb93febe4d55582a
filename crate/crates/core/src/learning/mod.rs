//! Overcost events, loss bands and the naive-Bayes model of the overcost node.

mod events;
mod naive_bayes;
pub mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use events::{
    ingest_events, ingest_events_from_reader, normalize_loss, write_events_csv, EventRecord, Ingested,
    Reject, EVENT_HEADER,
};
pub use naive_bayes::{
    compile_target_cpt, learn_naive_bayes, naive_bayes_posterior, DriftConditional, Granularity,
    NaiveBayesModel,
};

/// Overcost as a share of project cost, in four left-closed bands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OvercostBand {
    /// `[0, 1)` percent
    #[serde(rename = "P_1")]
    P1,
    /// `[1, 10)` percent
    #[serde(rename = "P_1_10")]
    P1To10,
    /// `[10, 100)` percent
    #[serde(rename = "P_10_100")]
    P10To100,
    /// 100 percent and above
    #[serde(rename = "P_100")]
    P100,
}

impl OvercostBand {
    pub const ALL: [OvercostBand; 4] =
        [OvercostBand::P1, OvercostBand::P1To10, OvercostBand::P10To100, OvercostBand::P100];

    pub fn label(self) -> &'static str {
        match self {
            OvercostBand::P1 => "P_1",
            OvercostBand::P1To10 => "P_1_10",
            OvercostBand::P10To100 => "P_10_100",
            OvercostBand::P100 => "P_100",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Percent range `[lower, upper)` covered by the band.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            OvercostBand::P1 => (0.0, 1.0),
            OvercostBand::P1To10 => (1.0, 10.0),
            OvercostBand::P10To100 => (10.0, 100.0),
            OvercostBand::P100 => (100.0, f64::INFINITY),
        }
    }
}

impl fmt::Display for OvercostBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for OvercostBand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OvercostBand::ALL
            .into_iter()
            .find(|b| b.label() == s)
            .ok_or_else(|| Error::input(format!("unknown overcost band `{s}`")))
    }
}

/// Maps a loss percentage onto its band.
pub fn bin_overcost(loss_pct: f64) -> Result<OvercostBand> {
    if !(loss_pct >= 0.0) {
        return Err(Error::input(format!("loss percentage {loss_pct} is negative or not a number")));
    }
    Ok(if loss_pct < 1.0 {
        OvercostBand::P1
    } else if loss_pct < 10.0 {
        OvercostBand::P1To10
    } else if loss_pct < 100.0 {
        OvercostBand::P10To100
    } else {
        OvercostBand::P100
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_edges() {
        assert_eq!(bin_overcost(0.0).unwrap(), OvercostBand::P1);
        assert_eq!(bin_overcost(0.5).unwrap(), OvercostBand::P1);
        assert_eq!(bin_overcost(1.0).unwrap(), OvercostBand::P1To10);
        assert_eq!(bin_overcost(10.0).unwrap(), OvercostBand::P10To100);
        assert_eq!(bin_overcost(99.999).unwrap(), OvercostBand::P10To100);
        assert_eq!(bin_overcost(100.0).unwrap(), OvercostBand::P100);
        assert_eq!(bin_overcost(150.0).unwrap(), OvercostBand::P100);
    }

    #[test]
    fn negative_and_nan_rejected() {
        assert!(bin_overcost(-0.1).is_err());
        assert!(bin_overcost(f64::NAN).is_err());
    }

    #[test]
    fn surjective_and_monotone_on_probe_points() {
        let bands: Vec<OvercostBand> =
            [0.5, 5.0, 50.0, 500.0].iter().map(|&p| bin_overcost(p).unwrap()).collect();
        assert_eq!(bands, OvercostBand::ALL);
    }

    #[test]
    fn labels_parse_back() {
        for b in OvercostBand::ALL {
            assert_eq!(b.label().parse::<OvercostBand>().unwrap(), b);
        }
    }
}
