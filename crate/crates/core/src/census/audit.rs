use rayon::prelude::*;
use serde::Serialize;

use super::{
    conjugacy_classify, knot_group_test, label_by_representatives, meridian_word,
    representative_tables, subgroup_table, CensusConfig, KnotClass, KnotVerdict, MeridianRef,
    PlanRow, Result, FINITE_POINTS,
};
use crate::coset::CosetTable;
use crate::fp::{catalog, Word};
use crate::representation::torsion_certificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClosureOutcome {
    /// The meridian already lies in H.
    Member,
    /// Adjoining it gives the whole group.
    IndexOne,
    /// Adjoining it gives a proper subgroup of this index.
    Index(usize),
    Exceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureEntry {
    pub meridian: MeridianRef,
    pub outcome: ClosureOutcome,
}

/// The outcome of adjoining each meridian at each point a row leaves out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub pattern: String,
    pub entries: Vec<ClosureEntry>,
    pub pass: bool,
}

/// For every point absent from `row` and every direction, checks whether the
/// meridian is in H (whose table is `table`) and otherwise whether adjoining
/// it collapses H to the whole group.
pub fn closure_audit(
    row: &PlanRow,
    table: &CosetTable,
    cfg: &CensusConfig,
) -> Result<ClosureReport> {
    let gens = row.generators();
    let mut entries = Vec::new();
    let mut pass = true;
    for p in 1..=FINITE_POINTS {
        if row.assignment[usize::from(p)].is_some() {
            continue;
        }
        let mut has_member = false;
        for j in 0..3 {
            let r = MeridianRef::new(p, j)?;
            let m = meridian_word(r);
            let outcome = if table.contains(&m)? {
                has_member = true;
                ClosureOutcome::Member
            } else {
                let mut g = gens.clone();
                g.push(m);
                match subgroup_table(&g, cfg.enumeration)?.index() {
                    Some(1) => ClosureOutcome::IndexOne,
                    Some(n) => ClosureOutcome::Index(n),
                    None => ClosureOutcome::Exceeded,
                }
            };
            pass &= matches!(outcome, ClosureOutcome::Member | ClosureOutcome::IndexOne);
            entries.push(ClosureEntry {
                meridian: r,
                outcome,
            });
        }
        pass &= has_member;
    }
    Ok(ClosureReport {
        pattern: row.pattern(),
        entries,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DfsOutcome {
    IndexOne,
    /// Open table cut off by an elliptic product.
    Torsion(String),
    /// A knot group passing the closure audit, with its class if it matches
    /// a pinned representative.
    Knot(Option<KnotClass>),
    Unresolved(String),
}

/// A terminal node of the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DfsNode {
    pub pattern: String,
    pub index: Option<usize>,
    pub outcome: DfsOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DfsSummary {
    pub leaves: Vec<DfsNode>,
    pub knot_groups: Vec<String>,
    /// Labels of the classes met, in the order I, IIA, IIB.
    pub classes: Vec<KnotClass>,
    /// Conjugacy classes among the knot groups found, counted directly.
    pub class_count: usize,
    pub unresolved: Vec<String>,
    pub pass: bool,
}

struct Ctx<'a> {
    cfg: &'a CensusConfig,
    reps: Vec<(KnotClass, Vec<Word>, CosetTable)>,
}

fn row_of(assignment: [Option<u8>; 11]) -> PlanRow {
    PlanRow {
        assignment,
        expected_index: super::ExpectedIndex::Index(1),
        expected_class: None,
    }
}

fn visit(ctx: &Ctx, assignment: [Option<u8>; 11], next: u8) -> Result<Vec<DfsNode>> {
    let row = row_of(assignment);
    let gens = row.generators();
    let table = subgroup_table(&gens, ctx.cfg.enumeration)?;
    let node = |outcome| DfsNode {
        pattern: row.pattern(),
        index: table.index(),
        outcome,
    };
    let why = match table.index() {
        Some(1) => return Ok(vec![node(DfsOutcome::IndexOne)]),
        None => {
            if let Some(c) = torsion_certificate(&gens, ctx.cfg.torsion_depth)? {
                let labels: Vec<String> = row.meridians().iter().map(MeridianRef::key).collect();
                return Ok(vec![node(DfsOutcome::Torsion(format!(
                    "{} (order {})",
                    c.describe(&labels),
                    c.order
                )))]);
            }
            "coset cap exceeded without a torsion certificate".to_string()
        }
        Some(n) => {
            let ev = knot_group_test(&table, &gens, ctx.cfg)?;
            if ev.verdict == KnotVerdict::Knot {
                if closure_audit(&row, &table, ctx.cfg)?.pass {
                    let class = label_by_representatives(&ctx.reps, &gens, n)?.map(|(c, _)| c);
                    return Ok(vec![node(DfsOutcome::Knot(class))]);
                }
                format!("knot group of index {n} failing the closure audit")
            } else {
                format!("index {n}, knot test {:?}", ev.verdict)
            }
        }
    };
    descend(ctx, assignment, &table, next, &why, &node)
}

fn descend(
    ctx: &Ctx,
    assignment: [Option<u8>; 11],
    table: &CosetTable,
    p: u8,
    why: &str,
    node: &dyn Fn(DfsOutcome) -> DfsNode,
) -> Result<Vec<DfsNode>> {
    if p > FINITE_POINTS {
        return Ok(vec![node(DfsOutcome::Unresolved(why.to_string()))]);
    }
    if table.is_closed() {
        for j in 0..3 {
            if table.contains(&meridian_word(MeridianRef::new(p, j)?))? {
                return descend(ctx, assignment, table, p + 1, why, node);
            }
        }
    }
    let children: Vec<Result<Vec<DfsNode>>> = (0..3u8)
        .into_par_iter()
        .map(|j| {
            let mut a = assignment;
            a[usize::from(p)] = Some(j);
            visit(ctx, a, p + 1)
        })
        .collect();
    let mut out = Vec::new();
    for c in children {
        out.extend(c?);
    }
    Ok(out)
}

/// Depth-first search over directions at points 2..=10 starting from
/// {m_inf_0, m_p1_1}. A branch stops at index 1, at a torsion certificate,
/// or at a knot group passing the closure audit; a point already carrying a
/// member meridian is skipped.
pub fn dfs_audit(cfg: &CensusConfig) -> Result<DfsSummary> {
    let ctx = Ctx {
        cfg,
        reps: representative_tables(cfg)?,
    };
    let mut start = [None; 11];
    start[0] = Some(0);
    start[1] = Some(1);
    let leaves = visit(&ctx, start, 2)?;

    let knots: Vec<&DfsNode> = leaves
        .iter()
        .filter(|n| matches!(n.outcome, DfsOutcome::Knot(_)))
        .collect();
    let mut classes: Vec<KnotClass> = knots
        .iter()
        .filter_map(|n| match n.outcome {
            DfsOutcome::Knot(c) => c,
            _ => None,
        })
        .collect();
    classes.sort();
    classes.dedup();
    let all_labeled = knots.iter().all(|n| n.outcome != DfsOutcome::Knot(None));

    let class_count = if knots.is_empty() {
        0
    } else {
        let gens: Vec<Vec<Word>> = knots
            .iter()
            .map(|n| PlanRow::from_pattern(&n.pattern).map(|r| r.generators()))
            .collect::<Result<_>>()?;
        let g = catalog().presentation("gamma53333")?;
        let tables: Vec<CosetTable> = gens
            .iter()
            .map(|w| crate::coset::enumerate_cosets(g, w, cfg.enumeration))
            .collect::<std::result::Result<_, _>>()?;
        conjugacy_classify(&tables, &gens)?.class_count()
    };
    let unresolved: Vec<String> = leaves
        .iter()
        .filter(|n| matches!(n.outcome, DfsOutcome::Unresolved(_)))
        .map(|n| n.pattern.clone())
        .collect();
    let pass =
        unresolved.is_empty() && all_labeled && classes == KnotClass::ALL && class_count == 3;
    Ok(DfsSummary {
        knot_groups: knots.iter().map(|n| n.pattern.clone()).collect(),
        leaves,
        classes,
        class_count,
        unresolved,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_one_closure() {
        let cfg = CensusConfig::default();
        let row = PlanRow::from_pattern("0 1 0 0 2 0 0 0").unwrap();
        let t = subgroup_table(&row.generators(), cfg.enumeration).unwrap();
        let r = closure_audit(&row, &t, &cfg).unwrap();
        // points 8, 9 and 10 are absent
        assert_eq!(r.entries.len(), 9);
        assert!(r.pass, "{r:?}");
        let at8: Vec<_> = r
            .entries
            .iter()
            .filter(|e| e.meridian.point() == 8)
            .collect();
        assert_eq!(
            at8.iter()
                .filter(|e| e.outcome == ClosureOutcome::Member)
                .count(),
            1
        );
    }

    #[test]
    fn closure_of_a_small_group_fails() {
        let cfg = CensusConfig::default();
        let row = PlanRow::from_pattern("0 1 0 1 1").unwrap();
        let t = subgroup_table(&row.generators(), cfg.enumeration).unwrap();
        assert_eq!(t.index(), Some(1));
        // every meridian is a member of the whole group
        let r = closure_audit(&row, &t, &cfg).unwrap();
        assert!(r
            .entries
            .iter()
            .all(|e| e.outcome == ClosureOutcome::Member));
    }
}
