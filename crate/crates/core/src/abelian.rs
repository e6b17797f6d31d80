//! Smith normal form over the integers and abelian invariants of finitely
//! presented groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::fp::Presentation;

/// A dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows of equal length.
    ///
    /// # Panics
    /// If the rows have different lengths.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.data[i * cols + j] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= k · row[src]
    fn sub_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            *self.at(dst, j) -= v;
        }
    }

    /// col[dst] -= k · col[src]
    fn sub_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            *self.at(i, dst) -= v;
        }
    }
}

/// Invariant factors `d1 | d2 | … ` of `m`, one per diagonal position
/// (`min(rows, cols)` of them), all nonnegative; zeros come last.
pub fn smith_normal_form(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        // smallest nonzero entry of the trailing block
        let Some((pi, pj)) = min_entry(&a, t) else {
            diag.extend(std::iter::repeat_n(BigInt::zero(), n - t));
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..a.rows {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t).div_floor(&p);
                    a.sub_row(i, t, &q);
                    dirty |= !a.get(i, t).is_zero();
                }
            }
            for j in t + 1..a.cols {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j).div_floor(&p);
                    a.sub_col(j, t, &q);
                    dirty |= !a.get(t, j).is_zero();
                }
            }
            if !dirty {
                // the pivot must divide the whole trailing block
                let bad = (t + 1..a.rows)
                    .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let one = -BigInt::one();
                        a.sub_row(t, i, &one);
                        continue;
                    }
                }
            }
            // move the smallest entry of row t / column t to the pivot
            let mut best = (t, t);
            for i in t..a.rows {
                if !a.get(i, t).is_zero() && a.get(i, t).abs() < a.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t..a.cols {
                if !a.get(t, j).is_zero() && a.get(t, j).abs() < a.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            a.swap_rows(t, best.0);
            a.swap_cols(t, best.1);
        }
        diag.push(a.get(t, t).abs());
    }
    diag
}

fn min_entry(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Invariants of an abelian group `Z^free_rank ⊕ Z/t1 ⊕ … ⊕ Z/tk`, with
/// `t1 | t2 | …` and every `ti > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Whether the group is infinite cyclic.
    pub fn is_z(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The relation matrix of the abelianization: one row per relator, one
/// column per generator, entries are exponent sums.
pub fn relation_matrix(p: &Presentation) -> IntegerMatrix {
    let n = p.generator_count();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(n)).collect();
    let mut m = IntegerMatrix::zeros(rows.len(), n);
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            *m.at(i, j) = BigInt::from(v);
        }
    }
    m
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let m = relation_matrix(p);
    let d = smith_normal_form(&m);
    let nonzero = d.iter().filter(|x| !x.is_zero()).count();
    AbelianInvariants {
        torsion: d.into_iter().filter(|x| *x > BigInt::one()).collect(),
        free_rank: p.generator_count() - nonzero,
    }
}
