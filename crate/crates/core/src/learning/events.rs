use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EVENT_HEADER: [&str; 5] = ["project_id", "description", "drift_id", "loss", "project_cost"];

/// One loss event attributed to a drift factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub project_id: String,
    pub description: String,
    pub drift_id: String,
    pub loss: f64,
    pub project_cost: f64,
}

/// Percent of project cost lost by the event.
pub fn normalize_loss(r: &EventRecord) -> f64 {
    100.0 * r.loss / r.project_cost
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub records: Vec<EventRecord>,
    pub rejects: Vec<Reject>,
}

impl Ingested {
    /// One `line N: reason` entry per rejected row.
    pub fn rejects_report(&self) -> String {
        self.rejects.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Reads an event CSV. Rows that break a record invariant are collected as
/// rejects; a wrong header fails the whole file. When `catalogue` is given,
/// rows naming other drift ids are rejected too.
pub fn ingest_events(path: impl AsRef<Path>, catalogue: Option<&[String]>) -> Result<Ingested> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_events_from_reader(file, catalogue).map_err(|e| match e {
        Error::Format { message, .. } => Error::format(path.display(), message),
        Error::Csv(c) => Error::format(path.display(), c.to_string()),
        other => other,
    })
}

pub fn ingest_events_from_reader<R: Read>(reader: R, catalogue: Option<&[String]>) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().map(str::trim).ne(EVENT_HEADER) {
        return Err(Error::format(
            "events",
            format!("header must be `{}`, found `{}`", EVENT_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let known: Option<BTreeSet<&str>> = catalogue.map(|c| c.iter().map(String::as_str).collect());

    let mut out = Ingested::default();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row, known.as_ref()) {
            Ok(rec) => out.records.push(rec),
            Err(reason) => out.rejects.push(Reject { line, reason }),
        }
    }
    if !out.rejects.is_empty() {
        log::warn!("{} event rows rejected", out.rejects.len());
    }
    Ok(out)
}

fn parse_row(row: &csv::StringRecord, known: Option<&BTreeSet<&str>>) -> std::result::Result<EventRecord, String> {
    if row.len() != EVENT_HEADER.len() {
        return Err(format!("expected {} fields, found {}", EVENT_HEADER.len(), row.len()));
    }
    let project_id = row[0].trim();
    if project_id.is_empty() {
        return Err("empty project id".into());
    }
    let drift_id = row[2].trim();
    if let Some(known) = known {
        if !known.contains(drift_id) {
            return Err(format!("unknown drift id `{drift_id}`"));
        }
    }
    let number = |i: usize| -> std::result::Result<f64, String> {
        let v: f64 = row[i].trim().parse().map_err(|_| format!("{} `{}` is not a number", EVENT_HEADER[i], &row[i]))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("{} is not finite", EVENT_HEADER[i]))
        }
    };
    let loss = number(3)?;
    let project_cost = number(4)?;
    if project_cost <= 0.0 {
        return Err("nonpositive project cost".into());
    }
    if loss < 0.0 {
        return Err("negative loss".into());
    }
    Ok(EventRecord {
        project_id: project_id.to_string(),
        description: row[1].to_string(),
        drift_id: drift_id.to_string(),
        loss,
        project_cost,
    })
}

pub fn write_events_csv(records: &[EventRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(EVENT_HEADER).expect("in-memory write");
    for r in records {
        let (loss, cost) = (r.loss.to_string(), r.project_cost.to_string());
        w.write_record([r.project_id.as_str(), &r.description, &r.drift_id, &loss, &cost])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
