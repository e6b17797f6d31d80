//! The meridian census: candidate meridians at the eleven parabolic fixed
//! points, replay of the shipped plan, knot-group tests, conjugacy classes
//! and the audits that make the table's terminations rigorous.

mod audit;
mod conjugacy;
mod knot;
mod lemma;
mod plan;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use audit::{
    closure_audit, dfs_audit, ClosureEntry, ClosureOutcome, ClosureReport, DfsNode, DfsOutcome,
    DfsSummary,
};
pub use conjugacy::{conjugacy_classify, conjugator_into, embed_in_gamma_prime, Classification};
pub use knot::{knot_group_test, KnotEvidence, KnotVerdict};
pub use lemma::{verify_knot_generator_sets, verify_main_lemma, ClassCounts, LemmaReport};
pub use plan::{parse_plan, shipped_plan, ExpectedIndex, PlanRow, SHIPPED_PLAN};

use crate::coset::{enumerate_cosets, CosetError, CosetTable, EnumerationOptions};
use crate::fp::{catalog, FpError, Word};
use crate::representation::{
    torsion_certificate, RepError, TorsionCertificate, DEFAULT_TORSION_DEPTH,
};
use crate::rewrite::RewriteError;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("invalid meridian: point {point}, direction {direction}")]
    InvalidMeridian { point: u8, direction: u8 },
    #[error("plan line {line}: {message}")]
    Plan { line: usize, message: String },
    #[error("subgroups have different indices ({0} and {1})")]
    UnequalIndex(usize, usize),
    #[error("subgroup table is not closed")]
    NotClosed,
    #[error("conjugacy relation is not an equivalence between groups {0} and {1}")]
    NotEquivalence(usize, usize),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

pub type Result<T> = std::result::Result<T, CensusError>;

/// Number of parabolic fixed points besides ∞.
pub const FINITE_POINTS: u8 = 10;

/// A meridian m_{p,j}: point 0 stands for ∞, 1..=10 for the finite points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeridianRef {
    point: u8,
    direction: u8,
}

impl MeridianRef {
    pub fn new(point: u8, direction: u8) -> Result<Self> {
        if point > FINITE_POINTS || direction > 2 {
            return Err(CensusError::InvalidMeridian { point, direction });
        }
        Ok(Self { point, direction })
    }

    pub fn infinity(direction: u8) -> Result<Self> {
        Self::new(0, direction)
    }

    pub fn point(&self) -> u8 {
        self.point
    }

    pub fn direction(&self) -> u8 {
        self.direction
    }

    /// All 33 meridians.
    pub fn all() -> Vec<Self> {
        (0..=FINITE_POINTS)
            .flat_map(|p| {
                (0..3).map(move |j| Self {
                    point: p,
                    direction: j,
                })
            })
            .collect()
    }

    /// Catalog key, e.g. `m_inf_0` or `m_p4_1`.
    pub fn key(&self) -> String {
        if self.point == 0 {
            format!("m_inf_{}", self.direction)
        } else {
            format!("m_p{}_{}", self.point, self.direction)
        }
    }
}

impl fmt::Display for MeridianRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Serialize for MeridianRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

/// The meridian as a freely reduced word in x, y, z.
pub fn meridian_word(r: MeridianRef) -> Word {
    catalog()
        .word(&r.key())
        .expect("catalog defines all 33 meridians")
        .clone()
}

/// Knot group conjugacy classes in Γ(5,2,2,3,3,3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum KnotClass {
    I,
    IIA,
    IIB,
}

impl KnotClass {
    pub const ALL: [KnotClass; 3] = [KnotClass::I, KnotClass::IIA, KnotClass::IIB];

    /// The plan row each label is pinned to.
    pub fn representative(self) -> &'static str {
        match self {
            KnotClass::I => "0 1 0 0 2 0 0 0",
            KnotClass::IIA => "0 1 0 0 2 0 0 2",
            KnotClass::IIB => "0 1 0 0 2 0 1",
        }
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnotClass::I => "I",
            KnotClass::IIA => "IIA",
            KnotClass::IIB => "IIB",
        })
    }
}

impl std::str::FromStr for KnotClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "I" => Ok(KnotClass::I),
            "IIA" => Ok(KnotClass::IIA),
            "IIB" => Ok(KnotClass::IIB),
            _ => Err(format!("unknown class `{s}`")),
        }
    }
}

/// Caps shared by every census computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusConfig {
    pub enumeration: EnumerationOptions,
    pub torsion_depth: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            enumeration: EnumerationOptions::default(),
            torsion_depth: DEFAULT_TORSION_DEPTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    /// Closed table, or an open one cut off by a torsion certificate.
    Resolved,
    /// The knot test could not finish within the caps.
    Inconclusive,
    /// Open table and no certificate.
    Unresolved,
}

/// A torsion certificate together with its rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Torsion {
    pub word: String,
    pub order: u32,
    #[serde(skip)]
    pub certificate: TorsionCertificate,
}

impl Torsion {
    fn new(c: TorsionCertificate, refs: &[MeridianRef]) -> Self {
        let labels: Vec<String> = refs.iter().map(MeridianRef::key).collect();
        Self {
            word: c.describe(&labels),
            order: c.order,
            certificate: c,
        }
    }
}

/// The computed outcome of one plan row.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub plan: PlanRow,
    /// `None` when enumeration hit the cap.
    pub index: Option<usize>,
    pub cosets_defined: usize,
    pub knot: Option<KnotEvidence>,
    pub is_knot: bool,
    pub torsion: Option<Torsion>,
    pub class: Option<KnotClass>,
    /// g with g H g⁻¹ equal to the class representative.
    pub conjugator: Option<String>,
    pub status: RowStatus,
}

impl CensusRow {
    /// Whether the computed row agrees with the plan's expectations.
    pub fn matches(&self) -> bool {
        match self.plan.expected_index {
            ExpectedIndex::Index(1) => self.index == Some(1),
            ExpectedIndex::Index(n) => {
                self.index == Some(n) && self.is_knot && self.class == self.plan.expected_class
            }
            ExpectedIndex::Torsion => self.index.is_none() && self.torsion.is_some(),
        }
    }

    pub fn index_label(&self) -> String {
        self.index.map_or("exceeded".into(), |i| i.to_string())
    }
}

fn subgroup_table(gens: &[Word], opts: EnumerationOptions) -> Result<CosetTable> {
    let g = catalog().presentation("gamma53333")?;
    Ok(enumerate_cosets(g, gens, opts)?)
}

/// Tables of the three pinned class representatives.
pub(crate) fn representative_tables(
    cfg: &CensusConfig,
) -> Result<Vec<(KnotClass, Vec<Word>, CosetTable)>> {
    KnotClass::ALL
        .iter()
        .map(|&c| {
            let row = PlanRow::from_pattern(c.representative())?;
            let gens = row.generators();
            let t = subgroup_table(&gens, cfg.enumeration)?;
            Ok((c, gens, t))
        })
        .collect()
}

/// Labels a knot group by conjugacy to the pinned representatives.
pub(crate) fn label_by_representatives(
    reps: &[(KnotClass, Vec<Word>, CosetTable)],
    gens: &[Word],
    index: usize,
) -> Result<Option<(KnotClass, Word)>> {
    for (c, _, t) in reps {
        if t.index() != Some(index) {
            continue;
        }
        if let Some(g) = conjugator_into(t, gens)? {
            return Ok(Some((*c, g)));
        }
    }
    Ok(None)
}

fn evaluate_row(
    plan: &PlanRow,
    cfg: &CensusConfig,
    reps: &[(KnotClass, Vec<Word>, CosetTable)],
) -> Result<CensusRow> {
    let gens = plan.generators();
    let table = subgroup_table(&gens, cfg.enumeration)?;
    let mut row = CensusRow {
        plan: plan.clone(),
        index: table.index(),
        cosets_defined: table.total_defined(),
        knot: None,
        is_knot: false,
        torsion: None,
        class: None,
        conjugator: None,
        status: RowStatus::Resolved,
    };
    match table.index() {
        None => {
            let refs = plan.meridians();
            match torsion_certificate(&gens, cfg.torsion_depth)? {
                Some(c) => row.torsion = Some(Torsion::new(c, &refs)),
                None => row.status = RowStatus::Unresolved,
            }
        }
        Some(1) => {}
        Some(n) => {
            let ev = knot_group_test(&table, &gens, cfg)?;
            row.is_knot = ev.verdict == KnotVerdict::Knot;
            if ev.verdict == KnotVerdict::Inconclusive {
                row.status = RowStatus::Inconclusive;
            }
            row.knot = Some(ev);
            if row.is_knot {
                if let Some((c, g)) = label_by_representatives(reps, &gens, n)? {
                    let names = catalog().presentation("gamma53333")?.names();
                    row.class = Some(c);
                    row.conjugator = Some(g.display(names).to_string());
                }
            }
        }
    }
    Ok(row)
}

/// Replays the plan. Rows run in parallel on the current rayon pool; the
/// output is in plan order.
pub fn run_plan(plan: &[PlanRow], cfg: &CensusConfig) -> Result<Vec<CensusRow>> {
    use rayon::prelude::*;
    let reps = representative_tables(cfg)?;
    plan.par_iter()
        .map(|r| evaluate_row(r, cfg, &reps))
        .collect()
}

const CSV_HEADER: [&str; 21] = [
    "inf",
    "1",
    "2",
    "3",
    "4",
    "5",
    "6",
    "7",
    "8",
    "9",
    "10",
    "expected_index",
    "expected_class",
    "index",
    "cosets_defined",
    "knot",
    "class",
    "conjugator",
    "torsion",
    "torsion_order",
    "status",
];

/// CSV with the plan's columns followed by the computed fields.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(CSV_HEADER.iter().copied().chain(["match"]))
        .expect("in-memory write");
    for r in rows {
        let mut rec: Vec<String> = r
            .plan
            .assignment
            .iter()
            .map(|d| d.map_or("-".into(), |d| d.to_string()))
            .collect();
        rec.push(r.plan.expected_index.to_string());
        rec.push(r.plan.expected_class.map_or("-".into(), |c| c.to_string()));
        rec.push(r.index_label());
        rec.push(r.cosets_defined.to_string());
        rec.push(r.is_knot.to_string());
        rec.push(r.class.map_or(String::new(), |c| c.to_string()));
        rec.push(r.conjugator.clone().unwrap_or_default());
        rec.push(r.torsion.as_ref().map_or(String::new(), |t| t.word.clone()));
        rec.push(
            r.torsion
                .as_ref()
                .map_or(String::new(), |t| t.order.to_string()),
        );
        rec.push(format!("{:?}", r.status));
        rec.push(r.matches().to_string());
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{classify_isometry, mobius_apply, BoundaryPoint, Isometry};
    use crate::representation::{fixed_point_rows, gamma53333_rep};

    #[test]
    fn thirty_three_meridians() {
        let all = MeridianRef::all();
        assert_eq!(all.len(), 33);
        assert!(MeridianRef::new(11, 0).is_err());
        assert!(MeridianRef::new(3, 3).is_err());
    }

    #[test]
    fn meridian_words() {
        let g = catalog().presentation("gamma53333").unwrap();
        let m = meridian_word(MeridianRef::infinity(0).unwrap());
        assert_eq!(m, g.parse_word("x y^-1 z y^-1").unwrap());
        let m10 = meridian_word(MeridianRef::new(10, 0).unwrap());
        assert_eq!(m10, m.conjugate_by(&Word::generator(0)));
    }

    #[test]
    fn meridians_fix_their_points() {
        let rep = gamma53333_rep();
        // points by plan column; columns 5 and 8 are table rows 8 and 5
        let mut pts = vec![BoundaryPoint::Infinity; 11];
        for r in fixed_point_rows() {
            let col = r.key.trim_start_matches("g_p").parse::<usize>().unwrap();
            pts[col] = BoundaryPoint::Finite(r.point.clone());
        }
        // row 2 prints a point its word does not reach; use the computed one
        let g2 = rep.evaluate(catalog().word("g_p2").unwrap()).unwrap();
        pts[2] = mobius_apply(&g2, &BoundaryPoint::Infinity);
        for r in MeridianRef::all() {
            let m = rep.evaluate(&meridian_word(r)).unwrap();
            assert_eq!(classify_isometry(&m, 12), Isometry::Parabolic, "{r}");
            let p = &pts[r.point() as usize];
            assert_eq!(&mobius_apply(&m, p), p, "{r}");
        }
    }

    #[test]
    fn csv_of_nothing_is_a_header() {
        let s = census_csv(&[]);
        assert_eq!(s.lines().count(), 1);
        assert!(s.starts_with("inf,1,2"));
    }
}
