//! Reidemeister–Schreier presentations of finite-index subgroups, Tietze
//! simplification, and the order of a finitely presented group by coset
//! enumeration over the trivial subgroup.

use std::collections::HashSet;

use thiserror::Error;

use crate::coset::{enumerate_cosets, CosetError, CosetTable, EnumerationOptions};
use crate::fp::{FpError, Letter, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Word(#[from] FpError),
    #[error("word does not lie in the subgroup")]
    NotInSubgroup,
}

/// A presentation of a subgroup on its Schreier generators, together with
/// the coset table it was read from.
#[derive(Debug, Clone)]
pub struct SubgroupPresentation {
    presentation: Presentation,
    table: CosetTable,
    /// Schreier generator for (coset, ambient generator), `None` on tree edges.
    slot: Vec<Option<usize>>,
    /// (coset, ambient generator) of each Schreier generator.
    defs: Vec<(usize, usize)>,
}

/// Builds the Reidemeister–Schreier presentation of the subgroup whose
/// coset table is `table`, using the table's breadth-first transversal.
pub fn reidemeister_schreier(table: &CosetTable) -> Result<SubgroupPresentation, RewriteError> {
    let n = table.index().ok_or(CosetError::NotClosed)?;
    let pres = table.presentation();
    let ng = pres.generator_count();

    // (c, g) is a tree edge when c·g is the child of c, or c is the child
    // of c·g along g^-1.
    let mut trivial = vec![false; n * ng];
    for (parent, letter, child) in table.tree_edges() {
        if letter.inverse {
            trivial[child * ng + letter.generator] = true;
        } else {
            trivial[parent * ng + letter.generator] = true;
        }
    }

    let mut slot = vec![None; n * ng];
    let mut defs = Vec::new();
    let mut names = Vec::new();
    for c in 0..n {
        for g in 0..ng {
            if !trivial[c * ng + g] {
                slot[c * ng + g] = Some(defs.len());
                defs.push((c, g));
                names.push(format!("{}_{}", pres.names()[g], c + 1));
            }
        }
    }

    let mut sp = SubgroupPresentation {
        presentation: Presentation::new(names.clone(), Vec::new())?,
        table: table.clone(),
        slot,
        defs,
    };
    let mut relators = Vec::with_capacity(n * pres.relators().len());
    for c in 0..n {
        for r in pres.relators() {
            let w = sp.rewrite_from(c, r).cyclically_reduced();
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    sp.presentation = Presentation::new(names, relators)?;
    Ok(sp)
}

impl SubgroupPresentation {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn generator_count(&self) -> usize {
        self.defs.len()
    }

    /// The ambient word `t_c · g · t_{c·g}^-1` defining Schreier generator `i`.
    pub fn generator_definition(&self, i: usize) -> Word {
        let (c, g) = self.defs[i];
        let d = self.table.act(c, Letter::pos(g));
        self.table
            .transversal(c)
            .mul(&Word::generator(g))
            .mul(&self.table.transversal(d).inverse())
    }

    fn rewrite_from(&self, start: usize, w: &Word) -> Word {
        let ng = self.table.presentation().generator_count();
        let mut c = start;
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            if l.inverse {
                let d = self.table.act(c, l);
                if let Some(s) = self.slot[d * ng + l.generator] {
                    out.push(Letter::neg(s));
                }
                c = d;
            } else {
                if let Some(s) = self.slot[c * ng + l.generator] {
                    out.push(Letter::pos(s));
                }
                c = self.table.act(c, l);
            }
        }
        Word::new(out)
    }

    /// Expresses an ambient element of the subgroup in Schreier generators.
    pub fn rewrite_in_subgroup(&self, w: &Word) -> Result<Word, RewriteError> {
        if !self.table.contains(w)? {
            return Err(RewriteError::NotInSubgroup);
        }
        Ok(self.rewrite_from(0, w))
    }

    /// Maps a word in Schreier generators back to an ambient word.
    pub fn expand(&self, w: &Word) -> Word {
        let defs: Vec<Word> = (0..self.defs.len())
            .map(|i| self.generator_definition(i))
            .collect();
        w.substitute(&defs)
            .expect("Schreier words only use Schreier generators")
    }
}

/// How hard [`tietze_simplify`] works.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Effort {
    /// Free and cyclic reduction, trivial relator deletion, deduplication.
    Reduce,
    /// Also eliminate generators occurring once in some relator, to a fixpoint.
    #[default]
    Eliminate,
}

/// A simplified presentation and the image of every original generator in it.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub presentation: Presentation,
    pub images: Vec<Word>,
}

impl Simplified {
    /// Image of a word over the original generators.
    pub fn map(&self, w: &Word) -> Word {
        w.substitute(&self.images)
            .expect("images cover every original generator")
    }
}

/// Applies Tietze transformations that preserve the group.
pub fn tietze_simplify(p: &Presentation, effort: Effort) -> Simplified {
    let ng = p.generator_count();
    let mut images: Vec<Word> = (0..ng).map(Word::generator).collect();
    let mut alive = vec![true; ng];
    let mut rels: Vec<Word> = dedup(p.relators().iter().map(Word::cyclically_reduced));

    if effort == Effort::Eliminate {
        while let Some((ri, g)) = pick_elimination(&rels) {
            let r = rels.swap_remove(ri);
            let value = solve_for(&r, g);
            for w in rels.iter_mut() {
                if w.occurrences(g) > 0 {
                    *w = replace(w, g, &value).cyclically_reduced();
                }
            }
            for img in images.iter_mut() {
                if img.occurrences(g) > 0 {
                    *img = replace(img, g, &value);
                }
            }
            alive[g] = false;
            rels = dedup(rels.into_iter());
        }
    }

    // renumber surviving generators
    let mut new_index = vec![usize::MAX; ng];
    let mut names = Vec::new();
    for g in 0..ng {
        if alive[g] {
            new_index[g] = names.len();
            names.push(p.names()[g].clone());
        }
    }
    let renumber = |w: &Word| -> Word {
        Word::new(
            w.letters()
                .iter()
                .map(|l| Letter::new(new_index[l.generator], l.inverse)),
        )
    };
    let rels: Vec<Word> = rels.iter().map(renumber).collect();
    let images = images.iter().map(renumber).collect();
    let presentation = Presentation::new(names, rels).expect("renumbered words are valid");
    Simplified {
        presentation,
        images,
    }
}

/// Chooses a relator and a generator occurring exactly once in it; prefers
/// short relators, then generators with few occurrences elsewhere.
fn pick_elimination(rels: &[Word]) -> Option<(usize, usize)> {
    let mut total = std::collections::HashMap::<usize, usize>::new();
    for r in rels {
        for l in r.letters() {
            *total.entry(l.generator).or_default() += 1;
        }
    }
    let mut best: Option<(usize, usize, (usize, usize))> = None;
    for (ri, r) in rels.iter().enumerate() {
        let mut counts = std::collections::BTreeMap::<usize, usize>::new();
        for l in r.letters() {
            *counts.entry(l.generator).or_default() += 1;
        }
        for (&g, &k) in &counts {
            if k != 1 {
                continue;
            }
            let cost = (r.len(), total[&g]);
            if best.is_none_or(|(_, _, c)| cost < c) {
                best = Some((ri, g, cost));
            }
        }
    }
    best.map(|(ri, g, _)| (ri, g))
}

/// From a relator containing `g` once, the word equal to `g`.
fn solve_for(r: &Word, g: usize) -> Word {
    let letters = r.letters();
    let pos = letters.iter().position(|l| l.generator == g).unwrap();
    // r = A g^e B = 1  =>  g^e = A^-1 B^-1
    let a = Word::new(letters[..pos].iter().copied());
    let b = Word::new(letters[pos + 1..].iter().copied());
    let v = a.inverse().mul(&b.inverse());
    if letters[pos].inverse {
        v.inverse()
    } else {
        v
    }
}

fn replace(w: &Word, g: usize, value: &Word) -> Word {
    w.substitute_with(|h| {
        Some(if h == g {
            value.clone()
        } else {
            Word::generator(h)
        })
    })
    .expect("every generator has an image")
}

/// Drops empty relators and duplicates up to cyclic rotation and inversion.
fn dedup(rels: impl Iterator<Item = Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rels {
        let r = r.cyclically_reduced();
        if r.is_empty() {
            continue;
        }
        if seen.insert(cyclic_key(&r)) {
            out.push(r);
        }
    }
    out
}

fn cyclic_key(w: &Word) -> Vec<(usize, bool)> {
    let mut best: Option<Vec<(usize, bool)>> = None;
    for v in [w.clone(), w.inverse()] {
        let ls: Vec<(usize, bool)> = v
            .letters()
            .iter()
            .map(|l| (l.generator, l.inverse))
            .collect();
        for i in 0..ls.len() {
            let rot: Vec<_> = ls[i..].iter().chain(&ls[..i]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// The order of the group presented by `p`, if enumeration over the trivial
/// subgroup closes within the options' cap.
pub fn fp_order(p: &Presentation, opts: EnumerationOptions) -> Result<Option<usize>, RewriteError> {
    Ok(enumerate_cosets(p, &[], opts)?.index())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::abelian_invariants;
    use crate::fp::catalog;

    fn pres(names: &[&str], rels: &[&str]) -> Presentation {
        Presentation::parse(names, rels).unwrap()
    }

    #[test]
    fn whole_cyclic_group() {
        let p = pres(&["a"], &["a^5"]);
        let t = enumerate_cosets(&p, &[Word::generator(0)], EnumerationOptions::default()).unwrap();
        let sp = reidemeister_schreier(&t).unwrap();
        assert_eq!(sp.generator_count(), 1);
        let s = tietze_simplify(sp.presentation(), Effort::Eliminate);
        assert_eq!(s.presentation.generator_count(), 1);
        assert_eq!(
            fp_order(&s.presentation, EnumerationOptions::default()).unwrap(),
            Some(5)
        );
    }

    #[test]
    fn even_integers_are_free_of_rank_one() {
        let p = pres(&["a"], &[]);
        let sq = p.parse_word("a^2").unwrap();
        let t =
            enumerate_cosets(&p, std::slice::from_ref(&sq), EnumerationOptions::default()).unwrap();
        assert_eq!(t.index(), Some(2));
        let sp = reidemeister_schreier(&t).unwrap();
        // 2·1 − (2 − 1)
        assert_eq!(sp.generator_count(), 1);
        assert!(sp.presentation().relators().is_empty());
        assert_eq!(sp.rewrite_in_subgroup(&sq).unwrap().len(), 1);
        assert!(matches!(
            sp.rewrite_in_subgroup(&Word::generator(0)),
            Err(RewriteError::NotInSubgroup)
        ));
    }

    #[test]
    fn schreier_generator_count_and_round_trip() {
        // A5 = <a,b | a^2, b^3, (ab)^5>, subgroup <b> of order 3
        let p = pres(&["a", "b"], &["a^2", "b^3", "(a b)^5"]);
        let sub = vec![p.parse_word("b").unwrap()];
        let t = enumerate_cosets(&p, &sub, EnumerationOptions::default()).unwrap();
        let n = t.index().unwrap();
        let sp = reidemeister_schreier(&t).unwrap();
        assert_eq!(sp.generator_count(), n * 2 - (n - 1));
        for text in ["b", "a b a b^-1 a", "b a b a b^-1 a b^-1", ""] {
            let w = p.parse_word(text).unwrap();
            if !t.contains(&w).unwrap() {
                continue;
            }
            let s = sp.rewrite_in_subgroup(&w).unwrap();
            let back = sp.expand(&s);
            assert_eq!(t.action(&back).unwrap(), t.action(&w).unwrap());
        }
        assert!(sp
            .rewrite_in_subgroup(&Word::identity())
            .unwrap()
            .is_empty());
        let s = tietze_simplify(sp.presentation(), Effort::Eliminate);
        assert_eq!(
            fp_order(&s.presentation, EnumerationOptions::default()).unwrap(),
            Some(60 / n)
        );
    }

    #[test]
    fn tietze_examples() {
        let s = tietze_simplify(&pres(&["a", "b"], &["b", "a^5"]), Effort::Eliminate);
        assert_eq!(s.presentation.names(), &["a"]);
        assert_eq!(s.presentation.relators().len(), 1);
        assert!(s.images[1].is_empty());

        let s = tietze_simplify(&pres(&["a", "b"], &["a b^-1"]), Effort::Eliminate);
        assert_eq!(s.presentation.generator_count(), 1);
        assert!(s.presentation.relators().is_empty());

        let s = tietze_simplify(
            &pres(&["a"], &["a a^-1", "a^3", "a^-3", "a a a"]),
            Effort::Reduce,
        );
        assert_eq!(s.presentation.relators().len(), 1);
    }

    #[test]
    fn order_examples() {
        let o = |p: &Presentation| fp_order(p, EnumerationOptions::default()).unwrap();
        assert_eq!(o(&pres(&["a"], &["a^5"])), Some(5));
        assert_eq!(o(&pres(&["a"], &["a"])), Some(1));
        let free = pres(&["a"], &[]);
        assert_eq!(
            fp_order(&free, EnumerationOptions::with_cap(100)).unwrap(),
            None
        );
    }

    #[test]
    fn index_sixty_rewrite_is_a_knot_group() {
        let cat = catalog();
        let g = cat.presentation("gamma53333").unwrap();
        let subs: Vec<Word> = ["m_inf_0", "m_p1_1", "m_p2_0", "m_p3_1", "m_p4_0"]
            .iter()
            .map(|k| cat.word(k).unwrap().clone())
            .collect();
        let t = enumerate_cosets(g, &subs, EnumerationOptions::default()).unwrap();
        assert_eq!(t.index(), Some(60));
        let sp = reidemeister_schreier(&t).unwrap();
        assert_eq!(sp.generator_count(), 121);
        let s = tietze_simplify(sp.presentation(), Effort::Eliminate);
        assert!(s.presentation.generator_count() < 121);
        let before = abelian_invariants(sp.presentation());
        assert_eq!(before, abelian_invariants(&s.presentation));
        assert_eq!(before.free_rank, 1);
        assert!(before.torsion.is_empty());

        let m = sp.rewrite_in_subgroup(&subs[0]).unwrap();
        assert!(!m.is_empty());
        let q = s.presentation.with_relators([s.map(&m)]).unwrap();
        let q = tietze_simplify(&q, Effort::Eliminate);
        assert_eq!(
            fp_order(&q.presentation, EnumerationOptions::default()).unwrap(),
            Some(1)
        );
    }
}
