use serde::Serialize;

use super::{CensusConfig, CensusError, Result};
use crate::abelian::{abelian_invariants, AbelianInvariants};
use crate::coset::CosetTable;
use crate::fp::{catalog, Word};
use crate::representation::torsion_certificate;
use crate::rewrite::{fp_order, reidemeister_schreier, tietze_simplify, Effort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KnotVerdict {
    Knot,
    NotKnot,
    /// The quotient's order could not be decided within the cap.
    Inconclusive,
}

/// What the knot-group test computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotEvidence {
    pub index: usize,
    pub schreier_generators: usize,
    pub simplified_generators: usize,
    pub simplified_relators: usize,
    pub abelianization: String,
    #[serde(skip)]
    pub abelian: AbelianInvariants,
    /// Order of H / ⟨⟨m_inf_0⟩⟩, when enumeration closed.
    pub quotient_order: Option<usize>,
    /// A short elliptic product of the generators, if any.
    pub torsion: Option<String>,
    pub verdict: KnotVerdict,
}

/// Tests whether the finite-index subgroup with table `table` and
/// generators `gens` is a knot group: killing m_inf_0 gives the trivial
/// group, the abelianization is Z and no short product of the generators is
/// elliptic.
pub fn knot_group_test(
    table: &CosetTable,
    gens: &[Word],
    cfg: &CensusConfig,
) -> Result<KnotEvidence> {
    let index = table.index().ok_or(CensusError::NotClosed)?;
    let sp = reidemeister_schreier(table)?;
    let simple = tietze_simplify(sp.presentation(), Effort::Eliminate);
    let abelian = abelian_invariants(&simple.presentation);

    let m = catalog().word("m_inf_0")?;
    let quotient_order = if table.contains(m)? {
        let r = simple.map(&sp.rewrite_in_subgroup(m)?);
        let q = simple.presentation.with_relators([r])?;
        let q = tietze_simplify(&q, Effort::Eliminate);
        fp_order(&q.presentation, cfg.enumeration)?
    } else {
        None
    };
    let torsion = torsion_certificate(gens, cfg.torsion_depth)?.map(|c| {
        let labels: Vec<String> = (1..=gens.len()).map(|i| format!("h{i}")).collect();
        format!("{} (order {})", c.describe(&labels), c.order)
    });

    let verdict = if torsion.is_some() || !abelian.is_z() || quotient_order.is_some_and(|n| n != 1)
    {
        KnotVerdict::NotKnot
    } else if quotient_order == Some(1) {
        KnotVerdict::Knot
    } else {
        KnotVerdict::Inconclusive
    };
    Ok(KnotEvidence {
        index,
        schreier_generators: sp.generator_count(),
        simplified_generators: simple.presentation.generator_count(),
        simplified_relators: simple.presentation.relators().len(),
        abelianization: abelian.to_string(),
        abelian,
        quotient_order,
        torsion,
        verdict,
    })
}
