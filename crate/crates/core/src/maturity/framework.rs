use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::network::Evidence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chronology {
    Prepare,
    Monitor,
    Valorize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Invariant {
    Actions,
    Resources,
    Frequency,
}

impl Chronology {
    pub const ALL: [Chronology; 3] = [Chronology::Prepare, Chronology::Monitor, Chronology::Valorize];

    fn letter(self) -> char {
        match self {
            Chronology::Prepare => 'P',
            Chronology::Monitor => 'M',
            Chronology::Valorize => 'V',
        }
    }
}

impl Invariant {
    pub const ALL: [Invariant; 3] = [Invariant::Actions, Invariant::Resources, Invariant::Frequency];

    fn letter(self) -> char {
        match self {
            Invariant::Actions => 'A',
            Invariant::Resources => 'R',
            Invariant::Frequency => 'F',
        }
    }
}

/// One of the nine chronology × invariant configurations, written `PA`,
/// `PR`, ... `VF`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub chronology: Chronology,
    pub invariant: Invariant,
}

impl Cell {
    pub const fn new(chronology: Chronology, invariant: Invariant) -> Self {
        Cell { chronology, invariant }
    }

    /// All nine cells, chronology-major.
    pub fn all() -> impl Iterator<Item = Cell> {
        Chronology::ALL
            .into_iter()
            .flat_map(|c| Invariant::ALL.into_iter().map(move |i| Cell::new(c, i)))
    }

    pub fn code(self) -> String {
        format!("{}{}", self.chronology.letter(), self.invariant.letter())
    }

    pub fn label(self) -> String {
        format!("{:?}-{:?}", self.chronology, self.invariant)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl FromStr for Cell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let (Some(c), Some(i), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(Error::input(format!("`{s}` is not a maturity cell")));
        };
        let chronology = Chronology::ALL.into_iter().find(|x| x.letter() == c);
        let invariant = Invariant::ALL.into_iter().find(|x| x.letter() == i);
        match (chronology, invariant) {
            (Some(c), Some(i)) => Ok(Cell::new(c, i)),
            _ => Err(Error::input(format!("`{s}` is not a maturity cell"))),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Identifies one assessment question and the maturity node it drives.
/// Written `<cell>.<domain>.LV<level>`, e.g. `MR.Social.LV3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuestionKey {
    pub cell: Cell,
    pub domain: String,
    pub level: u8,
}

impl QuestionKey {
    pub fn new(cell: Cell, domain: impl Into<String>, level: u8) -> Self {
        QuestionKey { cell, domain: domain.into(), level }
    }
}

impl fmt::Display for QuestionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.LV{}", self.cell, self.domain, self.level)
    }
}

impl FromStr for QuestionKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownQuestion(s.to_string());
        let (cell, rest) = s.split_once('.').ok_or_else(bad)?;
        let (domain, level) = rest.rsplit_once('.').ok_or_else(bad)?;
        let level: u8 = level.strip_prefix("LV").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if domain.is_empty() || level == 0 {
            return Err(bad());
        }
        Ok(QuestionKey { cell: cell.parse().map_err(|_| bad())?, domain: domain.to_string(), level })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub cell: Cell,
    pub domain: String,
    pub level: u8,
    pub text: String,
}

impl Question {
    pub fn key(&self) -> QuestionKey {
        QuestionKey::new(self.cell, self.domain.clone(), self.level)
    }
}

pub const DEFAULT_DOMAINS: [&str; 4] = ["Social", "Contract", "Interface", "Results"];
pub const DEFAULT_LEVELS: u8 = 5;

/// The 3×3 chronology/invariant grid crossed with a list of domains, each
/// cell and domain carrying one yes/no question per maturity level.
#[derive(Clone, Debug, PartialEq)]
pub struct MaturityFramework {
    domains: Vec<String>,
    levels: u8,
    questions: BTreeMap<QuestionKey, String>,
}

impl MaturityFramework {
    /// Requires exactly one question for every (cell, domain, level).
    pub fn new(domains: Vec<String>, levels: u8, questions: Vec<Question>) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::input("framework needs at least one domain"));
        }
        if levels == 0 {
            return Err(Error::input("framework needs at least one level"));
        }
        for (i, d) in domains.iter().enumerate() {
            if d.is_empty() || d.contains('.') {
                return Err(Error::input(format!("domain `{d}` must be non-empty and free of `.`")));
            }
            if domains[..i].contains(d) {
                return Err(Error::input(format!("domain `{d}` listed twice")));
            }
        }
        let mut map = BTreeMap::new();
        for q in questions {
            if !domains.contains(&q.domain) {
                return Err(Error::input(format!("question for unknown domain `{}`", q.domain)));
            }
            if q.level == 0 || q.level > levels {
                return Err(Error::input(format!("question {} is outside levels 1..={levels}", q.key())));
            }
            let key = q.key();
            if map.insert(key.clone(), q.text).is_some() {
                return Err(Error::input(format!("question {key} defined twice")));
            }
        }
        let expected = 9 * domains.len() * levels as usize;
        if map.len() != expected {
            return Err(Error::input(format!(
                "framework defines {} questions, expected {expected} (9 cells × {} domains × {levels} levels)",
                map.len(),
                domains.len()
            )));
        }
        Ok(MaturityFramework { domains, levels, questions: map })
    }

    /// Framework with placeholder question texts.
    pub fn with_generic_questions(domains: Vec<String>, levels: u8) -> Result<Self> {
        let mut qs = Vec::new();
        for cell in Cell::all() {
            for d in &domains {
                for level in 1..=levels {
                    qs.push(Question {
                        cell,
                        domain: d.clone(),
                        level,
                        text: format!("{} / {d}: is level {level} practiced?", cell.label()),
                    });
                }
            }
        }
        Self::new(domains, levels, qs)
    }

    pub fn domains(&self) -> &[String] {
        &self.domains
    }

    pub fn levels(&self) -> u8 {
        self.levels
    }

    pub fn has_domain(&self, domain: &str) -> bool {
        self.domains.iter().any(|d| d == domain)
    }

    pub fn question(&self, key: &QuestionKey) -> Option<&str> {
        self.questions.get(key).map(String::as_str)
    }

    pub fn questions(&self) -> impl Iterator<Item = Question> + '_ {
        self.questions.iter().map(|(k, text)| Question {
            cell: k.cell,
            domain: k.domain.clone(),
            level: k.level,
            text: text.clone(),
        })
    }

    pub fn question_count(&self) -> usize {
        self.questions.len()
    }

    /// Checks that every answer names a framework question.
    pub fn check_assessment(&self, a: &Assessment) -> Result<()> {
        for key in a.answers.keys() {
            let parsed: QuestionKey = key.parse()?;
            if !self.questions.contains_key(&parsed) {
                return Err(Error::UnknownQuestion(key.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn state(self) -> &'static str {
        match self {
            Answer::Yes => super::YES,
            Answer::No => super::NO,
        }
    }
}

/// A (possibly partial) set of yes/no answers keyed by question key string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<String>,
    #[serde(default)]
    pub answers: BTreeMap<String, Answer>,
}

impl Assessment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn answer(mut self, key: &QuestionKey, answer: Answer) -> Self {
        self.set(key, answer);
        self
    }

    pub fn set(&mut self, key: &QuestionKey, answer: Answer) {
        self.answers.insert(key.to_string(), answer);
    }

    pub fn get(&self, key: &QuestionKey) -> Option<Answer> {
        self.answers.get(&key.to_string()).copied()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path.display(), e.to_string()))
    }
}

/// One `Yes`/`No` binding per answered question, on the maturity node of the
/// same key. Unanswered questions bind nothing.
pub fn assessment_to_evidence(fw: &MaturityFramework, a: &Assessment) -> Result<Evidence> {
    fw.check_assessment(a)?;
    Ok(a.answers.iter().map(|(k, v)| (k.clone(), v.state())).collect())
}
