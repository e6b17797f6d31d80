use serde::Serialize;

use super::{CensusError, Result};
use crate::coset::CosetTable;
use crate::fp::{catalog, Word};

/// A word g with g·H₂·g⁻¹ ⊆ H₁, where `h1` is the coset table of H₁ and
/// `h2` generates H₂: the transversal of a coset fixed by every generator.
pub fn conjugator_into(h1: &CosetTable, h2: &[Word]) -> Result<Option<Word>> {
    let n = h1.index().ok_or(CensusError::NotClosed)?;
    'coset: for c in 0..n {
        for w in h2 {
            if h1.trace(c, w)? != c {
                continue 'coset;
            }
        }
        return Ok(Some(h1.transversal(c)));
    }
    Ok(None)
}

/// Conjugacy classes of a list of subgroups of equal finite index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// For each group, the position of its class's first member.
    pub class_of: Vec<usize>,
    /// For each group, g with g·H·g⁻¹ equal to its class's first member.
    #[serde(skip)]
    pub conjugators: Vec<Word>,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.class_of
            .iter()
            .enumerate()
            .filter(|(i, c)| i == *c)
            .count()
    }

    /// Group positions, one list per class, in order of first member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &c) in self.class_of.iter().enumerate() {
            if i == c {
                out.push(vec![i]);
            } else if let Some(v) = out.iter_mut().find(|v| v[0] == c) {
                v.push(i);
            }
        }
        out
    }
}

/// Partitions the groups (given by table and generators) into conjugacy
/// classes. Every pair is tested in both directions and the relation is
/// checked to be an equivalence.
pub fn conjugacy_classify(tables: &[CosetTable], gens: &[Vec<Word>]) -> Result<Classification> {
    assert_eq!(tables.len(), gens.len(), "one generator list per table");
    let n = tables.len();
    let index: Vec<usize> = tables
        .iter()
        .map(|t| t.index().ok_or(CensusError::NotClosed))
        .collect::<Result<_>>()?;
    if let Some(i) = index.iter().position(|&i| i != index[0]) {
        return Err(CensusError::UnequalIndex(index[0], index[i]));
    }
    // conj[i][j]: H_j is conjugate into H_i
    let mut conj = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            conj[i][j] = conjugator_into(&tables[i], &gens[j])?;
        }
    }
    let mut class_of = vec![0; n];
    for j in 0..n {
        class_of[j] = (0..=j).find(|&i| conj[i][j].is_some()).unwrap_or(j);
    }
    for i in 0..n {
        for j in 0..n {
            let same = class_of[i] == class_of[j];
            if same != conj[i][j].is_some() || same != conj[j][i].is_some() {
                return Err(CensusError::NotEquivalence(i, j));
            }
        }
    }
    let conjugators = (0..n)
        .map(|j| conj[class_of[j]][j].clone().expect("class member"))
        .collect();
    Ok(Classification {
        class_of,
        conjugators,
    })
}

/// Images in Γ(5,2,2,6,2,3) of words in x, y, z under the index-2 embedding.
pub fn embed_in_gamma_prime(words: &[Word]) -> Result<Vec<Word>> {
    let cat = catalog();
    let images: Vec<Word> = ["embed.x", "embed.y", "embed.z"]
        .iter()
        .map(|k| cat.word(k).cloned())
        .collect::<std::result::Result<_, _>>()?;
    Ok(words
        .iter()
        .map(|w| w.substitute(&images))
        .collect::<std::result::Result<_, _>>()?)
}
