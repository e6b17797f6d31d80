use std::fmt;

use serde::Serialize;

use super::{meridian_word, CensusError, KnotClass, MeridianRef, Result, FINITE_POINTS};
use crate::fp::Word;

/// The plan shipped with the crate.
pub const SHIPPED_PLAN: &str = include_str!("../../data/figs34.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpectedIndex {
    Index(usize),
    /// Expected to be cut off by a torsion certificate.
    Torsion,
}

impl fmt::Display for ExpectedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedIndex::Index(n) => write!(f, "{n}"),
            ExpectedIndex::Torsion => f.write_str("T"),
        }
    }
}

/// A row of the plan: a direction (or nothing) at ∞ and at each finite point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanRow {
    #[serde(serialize_with = "ser_pattern")]
    pub assignment: [Option<u8>; 11],
    pub expected_index: ExpectedIndex,
    pub expected_class: Option<KnotClass>,
}

fn ser_pattern<S: serde::Serializer>(
    a: &[Option<u8>; 11],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&pattern_of(a))
}

fn pattern_of(a: &[Option<u8>; 11]) -> String {
    let last = a.iter().rposition(Option::is_some).unwrap_or(0);
    a[..=last]
        .iter()
        .map(|d| d.map_or("-".into(), |d| d.to_string()))
        .collect::<Vec<_>>()
        .join(" ")
}

impl PlanRow {
    /// A row from a space-separated pattern such as `0 1 0 0 2 0 - 0`.
    /// Expectations are left as index 1 with no class.
    pub fn from_pattern(p: &str) -> Result<Self> {
        let tokens: Vec<&str> = p.split_whitespace().collect();
        Ok(Self {
            assignment: parse_assignment(&tokens, 0)?,
            expected_index: ExpectedIndex::Index(1),
            expected_class: None,
        })
    }

    pub fn pattern(&self) -> String {
        pattern_of(&self.assignment)
    }

    pub fn meridians(&self) -> Vec<MeridianRef> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(p, d)| {
                d.map(|d| MeridianRef {
                    point: p as u8,
                    direction: d,
                })
            })
            .collect()
    }

    pub fn generators(&self) -> Vec<Word> {
        self.meridians().into_iter().map(meridian_word).collect()
    }
}

fn parse_assignment(tokens: &[&str], line: usize) -> Result<[Option<u8>; 11]> {
    let err = |message: String| CensusError::Plan { line, message };
    if tokens.len() > usize::from(FINITE_POINTS) + 1 {
        return Err(err(format!(
            "{} point columns, at most 11 allowed",
            tokens.len()
        )));
    }
    let mut a = [None; 11];
    for (p, t) in tokens.iter().enumerate() {
        a[p] = match *t {
            "-" => None,
            "0" => Some(0),
            "1" => Some(1),
            "2" => Some(2),
            other => return Err(err(format!("bad direction `{other}` at column {p}"))),
        };
    }
    if a[0] != Some(0) || a[1] != Some(1) {
        return Err(err(
            "rows must start with direction 0 at ∞ and 1 at point 1".into(),
        ));
    }
    Ok(a)
}

/// Parses a tab-separated plan: eleven point columns, expected index
/// (a number or `T`) and class (`I`, `IIA`, `IIB` or `-`). Lines starting
/// with `#` and the header line starting with `inf` are skipped.
pub fn parse_plan(text: &str) -> Result<Vec<PlanRow>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim_end();
        if l.is_empty() || l.starts_with('#') || l.starts_with("inf") {
            continue;
        }
        let f: Vec<&str> = l.split('\t').map(str::trim).collect();
        if f.len() != 13 {
            return Err(CensusError::Plan {
                line,
                message: format!("expected 13 tab-separated fields, found {}", f.len()),
            });
        }
        let assignment = parse_assignment(&f[..11], line)?;
        let expected_index = match f[11] {
            "T" => ExpectedIndex::Torsion,
            n => ExpectedIndex::Index(n.parse().map_err(|_| CensusError::Plan {
                line,
                message: format!("bad index `{n}`"),
            })?),
        };
        let expected_class = match f[12] {
            "-" => None,
            c => Some(
                c.parse()
                    .map_err(|message| CensusError::Plan { line, message })?,
            ),
        };
        rows.push(PlanRow {
            assignment,
            expected_index,
            expected_class,
        });
    }
    Ok(rows)
}

pub fn shipped_plan() -> Vec<PlanRow> {
    parse_plan(SHIPPED_PLAN).expect("shipped plan parses")
}
