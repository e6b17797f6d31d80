//! Todd–Coxeter coset enumeration.
//!
//! [`enumerate_cosets`] closes the action table of a presentation on the
//! right cosets of a finitely generated subgroup, or reports that the coset
//! cap was exhausted. Closed tables are standardized: cosets are renumbered
//! in breadth-first order from the subgroup coset, scanning columns in
//! generator order, so the table and its transversal depend only on the
//! subgroup and not on the strategy that produced them.

mod engine;
mod permutation;

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{FpError, Letter, Presentation, Word};
use engine::{Columns, Engine, Outcome, NONE};

pub use permutation::Permutation;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Haselgrove–Leech–Trotter with a relator lookahead pass when the table fills.
    #[default]
    Hlt,
    Felsch,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hlt" => Ok(Strategy::Hlt),
            "felsch" => Ok(Strategy::Felsch),
            other => Err(format!(
                "unknown strategy `{other}` (expected hlt or felsch)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub strategy: Strategy,
    pub max_cosets: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Hlt,
            max_cosets: DEFAULT_MAX_COSETS,
        }
    }
}

impl EnumerationOptions {
    pub fn with_cap(max_cosets: usize) -> Self {
        Self {
            max_cosets,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Closed,
    Exceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error(transparent)]
    Word(#[from] FpError),
    #[error("coset table is not closed")]
    NotClosed,
    #[error("max_cosets must be at least 1")]
    ZeroCap,
}

/// The result of a coset enumeration.
#[derive(Debug, Clone)]
pub struct CosetTable {
    presentation: Presentation,
    cols: Columns,
    status: Status,
    size: usize,
    table: Vec<u32>,
    /// Breadth-first tree: (parent coset, column) for every coset but 0.
    tree: Vec<(u32, u32)>,
    total_defined: usize,
    max_live: usize,
}

/// Enumerates the cosets of `⟨subgens⟩` in the group presented by `pres`.
///
/// Cap exhaustion is a normal result with status [`Status::Exceeded`].
pub fn enumerate_cosets(
    pres: &Presentation,
    subgens: &[Word],
    opts: EnumerationOptions,
) -> Result<CosetTable, CosetError> {
    if opts.max_cosets == 0 {
        return Err(CosetError::ZeroCap);
    }
    for w in subgens {
        pres.check_word(w)?;
    }
    let cols = Columns::new(pres.involutions());
    let to_cols = |w: &Word| -> Vec<usize> {
        pres.normalize(w)
            .letters()
            .iter()
            .map(|l| cols.of_letter[l.generator][l.inverse as usize])
            .collect()
    };
    let relators: Vec<Vec<usize>> = pres
        .relators()
        .iter()
        .map(|r| to_cols(&r.cyclically_reduced()))
        .map(|r| cyclic_normalize(r, &cols))
        // g·g for an involution column holds by construction
        .filter(|r| !(r.len() == 2 && r[0] == r[1] && cols.inv[r[0]] == r[0]))
        .filter(|r| !r.is_empty())
        .collect();
    let subs: Vec<Vec<usize>> = subgens
        .iter()
        .map(to_cols)
        .filter(|s| !s.is_empty())
        .collect();

    let mut engine = Engine::new(&cols, &relators, &subs, opts.max_cosets, opts.strategy);
    let outcome = engine.run(opts.strategy);
    let (total_defined, max_live) = (engine.total_defined, engine.max_live);
    match outcome {
        Outcome::Exceeded => Ok(CosetTable {
            presentation: pres.clone(),
            cols,
            status: Status::Exceeded,
            size: 0,
            table: Vec::new(),
            tree: Vec::new(),
            total_defined,
            max_live,
        }),
        Outcome::Closed => {
            let (raw, n) = engine.into_table();
            let (table, tree) = standardize(&raw, n, cols.len());
            Ok(CosetTable {
                presentation: pres.clone(),
                cols,
                status: Status::Closed,
                size: n,
                table,
                tree,
                total_defined,
                max_live,
            })
        }
    }
}

/// Cancels cyclic involution pairs (`y … y`) left after normalization.
fn cyclic_normalize(mut r: Vec<usize>, cols: &Columns) -> Vec<usize> {
    loop {
        let n = r.len();
        if n >= 2 && cols.inv[r[0]] == r[n - 1] {
            r.pop();
            r.remove(0);
        } else {
            return r;
        }
    }
}

fn standardize(raw: &[u32], n: usize, ncols: usize) -> (Vec<u32>, Vec<(u32, u32)>) {
    let mut order = Vec::with_capacity(n);
    let mut new_of = vec![NONE; n];
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    new_of[0] = 0;
    order.push(0u32);
    let mut head = 0;
    while head < order.len() {
        let c = order[head] as usize;
        head += 1;
        for x in 0..ncols {
            let d = raw[c * ncols + x] as usize;
            if new_of[d] == NONE {
                new_of[d] = order.len() as u32;
                order.push(d as u32);
                tree.push((new_of[c], x as u32));
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    let mut table = vec![NONE; n * ncols];
    for (new_c, &old_c) in order.iter().enumerate() {
        for x in 0..ncols {
            table[new_c * ncols + x] = new_of[raw[old_c as usize * ncols + x] as usize];
        }
    }
    (table, tree)
}

impl CosetTable {
    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_closed(&self) -> bool {
        self.status == Status::Closed
    }

    /// The index of the subgroup, when the table closed.
    pub fn index(&self) -> Option<usize> {
        self.is_closed().then_some(self.size)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Total cosets defined during the run, including ones later identified.
    pub fn total_defined(&self) -> usize {
        self.total_defined
    }

    pub fn max_live(&self) -> usize {
        self.max_live
    }

    fn closed(&self) -> Result<(), CosetError> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(CosetError::NotClosed)
        }
    }

    fn column(&self, l: Letter) -> usize {
        self.cols.of_letter[l.generator][l.inverse as usize]
    }

    /// Image of coset `c` under a single letter.
    pub fn act(&self, c: usize, l: Letter) -> usize {
        self.table[c * self.cols.len() + self.column(l)] as usize
    }

    /// Coset reached from `c` by reading `w` left to right.
    pub fn trace(&self, c: usize, w: &Word) -> Result<usize, CosetError> {
        self.closed()?;
        self.presentation.check_word(w)?;
        Ok(w.letters().iter().fold(c, |k, &l| self.act(k, l)))
    }

    /// Whether `w` lies in the subgroup.
    pub fn contains(&self, w: &Word) -> Result<bool, CosetError> {
        Ok(self.trace(0, w)? == 0)
    }

    /// Permutation of the cosets induced by right multiplication by `w`.
    pub fn action(&self, w: &Word) -> Result<Permutation, CosetError> {
        self.closed()?;
        self.presentation.check_word(w)?;
        let images = (0..self.size)
            .map(|c| w.letters().iter().fold(c, |k, &l| self.act(k, l)) as u32)
            .collect();
        Ok(Permutation::from_images(images))
    }

    /// Permutation induced by each generator.
    pub fn generator_actions(&self) -> Result<Vec<Permutation>, CosetError> {
        (0..self.presentation.generator_count())
            .map(|g| self.action(&Word::generator(g)))
            .collect()
    }

    /// Shortlex-minimal word (in column order) leading from coset 0 to `c`.
    pub fn transversal(&self, c: usize) -> Word {
        let mut letters = Vec::new();
        let mut k = c;
        while k != 0 {
            let (parent, col) = self.tree[k - 1];
            let (g, inv) = self.cols.letter[col as usize];
            letters.push(Letter::new(g, inv));
            k = parent as usize;
        }
        letters.reverse();
        Word::new(letters)
    }

    /// Tree edges of the transversal as (parent coset, letter, child coset).
    pub fn tree_edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.tree.iter().enumerate().map(move |(i, &(p, col))| {
            let (g, inv) = self.cols.letter[col as usize];
            (p as usize, Letter::new(g, inv), i + 1)
        })
    }

    /// Letters with their own table column, in column order.
    pub fn column_letters(&self) -> Vec<Letter> {
        self.cols
            .letter
            .iter()
            .map(|&(g, inv)| Letter::new(g, inv))
            .collect()
    }

    /// Sum over generators of the fixed-point counts of their actions.
    pub fn fixed_point_total(&self) -> Result<usize, CosetError> {
        Ok(self
            .generator_actions()?
            .iter()
            .map(Permutation::fixed_point_count)
            .sum())
    }

    /// CSV dump: one row per coset, one column per table column, plus the
    /// transversal word.
    pub fn to_csv(&self) -> Result<String, CosetError> {
        self.closed()?;
        let names = self.presentation.names();
        let mut out = String::from("coset");
        for l in self.column_letters() {
            out.push(',');
            out.push_str(&names[l.generator]);
            if l.inverse {
                out.push_str("^-1");
            }
        }
        out.push_str(",transversal\n");
        for c in 0..self.size {
            let _ = write!(out, "{}", c + 1);
            for x in 0..self.cols.len() {
                let _ = write!(out, ",{}", self.table[c * self.cols.len() + x] + 1);
            }
            let _ = writeln!(out, ",{}", self.transversal(c).display(names));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::catalog;

    fn cyclic(n: usize) -> Presentation {
        Presentation::parse(&["a"], &[&format!("a^{n}")]).unwrap()
    }

    fn both(pres: &Presentation, subs: &[Word]) -> Vec<Option<usize>> {
        [Strategy::Hlt, Strategy::Felsch]
            .into_iter()
            .map(|strategy| {
                enumerate_cosets(
                    pres,
                    subs,
                    EnumerationOptions {
                        strategy,
                        max_cosets: 10_000,
                    },
                )
                .unwrap()
                .index()
            })
            .collect()
    }

    #[test]
    fn cyclic_group_order() {
        assert_eq!(both(&cyclic(5), &[]), vec![Some(5), Some(5)]);
        assert_eq!(both(&cyclic(1), &[]), vec![Some(1), Some(1)]);
    }

    #[test]
    fn small_finite_groups() {
        // S3 = <a, b | a^3, b^2, (ab)^2>
        let s3 = Presentation::parse(&["a", "b"], &["a^3", "b^2", "(a b)^2"]).unwrap();
        assert_eq!(both(&s3, &[]), vec![Some(6), Some(6)]);
        let b = s3.parse_word("b").unwrap();
        assert_eq!(both(&s3, &[b]), vec![Some(3), Some(3)]);
        // A5 as the (2,3,5) triangle group
        let a5 = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^5"]).unwrap();
        assert_eq!(both(&a5, &[]), vec![Some(60), Some(60)]);
        // Coincidence-heavy: <a, b | b^-1 a b = a^2, a^-1 b a = b^2> is trivial.
        let triv = Presentation::parse(&["a", "b"], &["b^-1 a b a^-2", "a^-1 b a b^-2"]).unwrap();
        assert_eq!(both(&triv, &[]), vec![Some(1), Some(1)]);
    }

    #[test]
    fn exceeded_is_not_an_error() {
        let free = Presentation::parse(&["a"], &[]).unwrap();
        let t = enumerate_cosets(&free, &[], EnumerationOptions::with_cap(50)).unwrap();
        assert_eq!(t.status(), Status::Exceeded);
        assert_eq!(t.index(), None);
        assert!(matches!(
            t.contains(&Word::identity()),
            Err(CosetError::NotClosed)
        ));
        assert!(matches!(
            t.action(&Word::identity()),
            Err(CosetError::NotClosed)
        ));
    }

    #[test]
    fn malformed_subgroup_word_is_an_error() {
        let err = enumerate_cosets(
            &cyclic(3),
            &[Word::generator(4)],
            EnumerationOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            CosetError::Word(FpError::UnknownGeneratorIndex(4))
        ));
        let err = enumerate_cosets(&cyclic(3), &[], EnumerationOptions::with_cap(0)).unwrap_err();
        assert_eq!(err, CosetError::ZeroCap);
    }

    #[test]
    fn free_group_subgroup_index_two() {
        let free = Presentation::parse(&["a"], &[]).unwrap();
        let a2 = free.parse_word("a^2").unwrap();
        let t = enumerate_cosets(&free, &[a2], EnumerationOptions::default()).unwrap();
        assert_eq!(t.index(), Some(2));
    }

    #[test]
    fn membership_action_transversal() {
        let a5 = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^5"]).unwrap();
        let b = a5.parse_word("b").unwrap();
        let t =
            enumerate_cosets(&a5, std::slice::from_ref(&b), EnumerationOptions::default()).unwrap();
        assert_eq!(t.index(), Some(20));
        assert!(t.contains(&b).unwrap());
        assert!(t.contains(&Word::identity()).unwrap());
        assert!(!t.contains(&a5.parse_word("a").unwrap()).unwrap());
        assert!(t.action(&Word::identity()).unwrap().is_identity());
        assert_eq!(t.action(&b).unwrap().apply(0), 0);
        for r in a5.relators() {
            assert!(t.action(r).unwrap().is_identity());
        }
        for c in 0..20 {
            assert_eq!(t.trace(0, &t.transversal(c)).unwrap(), c);
        }
        assert!(t.transversal(0).is_empty());
        // g and g^-1 act as mutually inverse permutations
        let bi = a5.parse_word("b^-1").unwrap();
        assert!(t
            .action(&b)
            .unwrap()
            .then(&t.action(&bi).unwrap())
            .is_identity());
    }

    #[test]
    fn strategies_agree_on_standardized_table() {
        let a5 = Presentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^5"]).unwrap();
        let b = a5.parse_word("b").unwrap();
        let h =
            enumerate_cosets(&a5, std::slice::from_ref(&b), EnumerationOptions::default()).unwrap();
        let f = enumerate_cosets(
            &a5,
            &[b],
            EnumerationOptions {
                strategy: Strategy::Felsch,
                max_cosets: 1000,
            },
        )
        .unwrap();
        assert_eq!(h.to_csv().unwrap(), f.to_csv().unwrap());
    }

    #[test]
    fn gamma53333_known_rows() {
        let cat = catalog();
        let g = cat.presentation("gamma53333").unwrap();
        let w = |k: &str| cat.word(k).unwrap().clone();
        // "0 1 0 0 0 1": index 1
        let subs: Vec<Word> = ["m_inf_0", "m_p1_1", "m_p2_0", "m_p3_0", "m_p4_0", "m_p5_1"]
            .iter()
            .map(|k| w(k))
            .collect();
        let t = enumerate_cosets(g, &subs, EnumerationOptions::default()).unwrap();
        assert_eq!(t.index(), Some(1));
        // "0 1 0 1 0": index 60
        let subs: Vec<Word> = ["m_inf_0", "m_p1_1", "m_p2_0", "m_p3_1", "m_p4_0"]
            .iter()
            .map(|k| w(k))
            .collect();
        let t = enumerate_cosets(g, &subs, EnumerationOptions::default()).unwrap();
        assert_eq!(t.index(), Some(60));
        assert!(!t.contains(&g.parse_word("x").unwrap()).unwrap());
        for s in &subs {
            assert!(t.contains(s).unwrap());
        }
    }

    #[test]
    fn csv_dump_shape() {
        let t = enumerate_cosets(&cyclic(3), &[], EnumerationOptions::default()).unwrap();
        let csv = t.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "coset,a,a^-1,transversal");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "1,2,3,1");
    }
}
