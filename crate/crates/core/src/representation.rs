//! The PSL(2, C) representations of Γ(5,2,2,3,3,3) and Γ(5,2,2,6,2,3) and
//! the checks run against them.
//!
//! Γ(5,2,2,3,3,3) is represented over F = Q(u, ω). The generator z' of
//! Γ(5,2,2,6,2,3) has entries in F(i), which is handled by
//! [`TwistedElement`] with t = i.

use serde::Serialize;
use thiserror::Error;

use crate::coset::{enumerate_cosets, CosetError, EnumerationOptions};
use crate::field::{
    classify_isometry, format_complex, mobius_apply, BoundaryPoint, FieldElement, Isometry, Mat2,
    ProjMatrix, Scalar, TwistedElement, DEFAULT_ORDER_BOUND,
};
use crate::fp::{catalog, FpError, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("generator {0} has no matrix")]
    Unassigned(usize),
    #[error(transparent)]
    Word(#[from] FpError),
    #[error(transparent)]
    Coset(#[from] CosetError),
}

/// A matrix for each generator of a presentation.
#[derive(Debug, Clone)]
pub struct RepAssignment<K> {
    names: Vec<String>,
    matrices: Vec<Mat2<K>>,
}

impl<K: Scalar> RepAssignment<K> {
    pub fn new(names: Vec<String>, matrices: Vec<Mat2<K>>) -> Self {
        Self { names, matrices }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn matrix(&self, g: usize) -> Option<&Mat2<K>> {
        self.matrices.get(g)
    }

    /// Product of the generator matrices along `w`.
    pub fn evaluate(&self, w: &Word) -> Result<Mat2<K>, RepError> {
        let mut out = Mat2::identity();
        for l in w.letters() {
            let m = self
                .matrices
                .get(l.generator)
                .ok_or(RepError::Unassigned(l.generator))?;
            out = out.mul(&if l.inverse { m.inverse() } else { m.clone() });
        }
        Ok(out)
    }
}

pub fn evaluate_word<K: Scalar>(w: &Word, rep: &RepAssignment<K>) -> Result<Mat2<K>, RepError> {
    rep.evaluate(w)
}

fn fe(c: [i64; 4]) -> FieldElement {
    FieldElement::from_ints(c)
}

fn inv(x: &FieldElement) -> FieldElement {
    x.inv().expect("nonzero constant")
}

/// x, y, z of Γ(5,2,2,3,3,3).
pub fn gamma53333_rep() -> RepAssignment<FieldElement> {
    let u = FieldElement::u();
    let w = FieldElement::omega();
    let w2 = &w * &w;
    let zero = FieldElement::zero();
    let x = ProjMatrix::new(u.clone(), -inv(&u), u.clone(), zero.clone());
    let y = ProjMatrix::new(zero.clone(), &w * &inv(&u), -(&inv(&w) * &u), zero.clone());
    let z = ProjMatrix::new(zero.clone(), &w2 * &inv(&u), -(&inv(&w2) * &u), zero);
    RepAssignment::new(vec!["x".into(), "y".into(), "z".into()], vec![x, y, z])
}

fn twist(m: &ProjMatrix) -> Mat2<TwistedElement> {
    m.map(|x| TwistedElement::real(x.clone()))
}

/// x', y', z' of Γ(5,2,2,6,2,3); x' = x, y' = y and z' = [[0, i/u], [i u, 0]].
pub fn gamma522623_rep() -> RepAssignment<TwistedElement> {
    let g = gamma53333_rep();
    let u = FieldElement::u();
    let zp = Mat2::new(
        TwistedElement::zero(),
        TwistedElement::imaginary(inv(&u)),
        TwistedElement::imaginary(u),
        TwistedElement::zero(),
    );
    RepAssignment::new(
        vec!["x'".into(), "y'".into(), "z'".into()],
        vec![twist(&g.matrices[0]), twist(&g.matrices[1]), zp],
    )
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        pass: bool,
    ) -> Self {
        Self {
            name: name.into(),
            expected: expected.into(),
            computed: computed.into(),
            pass,
        }
    }
}

/// A list of checks; passes when all of them do.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn show_point(p: &BoundaryPoint) -> String {
    match p.to_complex() {
        Some(z) => format!("{p} ≈ {}", format_complex(z)),
        None => p.to_string(),
    }
}

fn show_matrix<K: Scalar>(m: &Mat2<K>, identity: bool) -> String {
    if identity {
        "±I".into()
    } else {
        format!("{m:?}")
    }
}

/// Evaluates every relator of `pres` and checks it is ±I.
pub fn verify_relator_kernel<K: Scalar>(
    label: &str,
    pres: &Presentation,
    rep: &RepAssignment<K>,
) -> Result<Report, RepError> {
    let mut r = Report::default();
    for w in pres.relators() {
        let m = rep.evaluate(w)?;
        let ok = m.is_identity();
        r.push(Check::new(
            format!("{label} relator {}", pres.display_word(w)),
            "±I",
            show_matrix(&m, ok),
            ok,
        ));
    }
    Ok(r)
}

/// m_inf_j is the translation by ω^j.
pub fn verify_meridians() -> Result<Report, RepError> {
    let cat = catalog();
    let rep = gamma53333_rep();
    let w = FieldElement::omega();
    let mut r = Report::default();
    for j in 0..3 {
        let key = format!("m_inf_{j}");
        let m = rep.evaluate(cat.word(&key)?)?;
        let shift = w.pow(j).expect("ω is a unit");
        let want = ProjMatrix::new(
            FieldElement::one(),
            shift.clone(),
            FieldElement::zero(),
            FieldElement::one(),
        );
        r.push(Check::new(
            format!("{key} matrix"),
            want.to_string(),
            m.to_string(),
            m == want,
        ));
    }
    Ok(r)
}

/// A row of the table of conjugators and the points they send ∞ to.
#[derive(Debug, Clone)]
pub struct FixedPointRow {
    pub row: usize,
    /// Catalog key of the conjugator.
    pub key: &'static str,
    /// The point as printed.
    pub printed: &'static str,
    pub point: FieldElement,
}

/// The ten printed rows. Rows 5 and 8 use the census conjugators for plan
/// columns 8 and 5 (see the catalog).
pub fn fixed_point_rows() -> Vec<FixedPointRow> {
    let u = FieldElement::u();
    let w = FieldElement::omega();
    let one = FieldElement::one();
    let u2 = &u * &u;
    let p4 = inv(&(&w * &(&one + &u)));
    let rows: Vec<(usize, &'static str, &'static str, FieldElement)> = vec![
        (1, "g_p1", "0", FieldElement::zero()),
        (2, "g_p2", "-ω/u^2", -(&w * &inv(&u2))),
        (3, "g_p3", "ω^-1", inv(&w)),
        (4, "g_p4", "1/(ω(1+u))", p4.clone()),
        (5, "g_p8", "1 + 1/(ω(1+u))", &one + &p4),
        (
            6,
            "g_p6",
            "ω/u - 1 + 2/ω",
            &(&(&w * &inv(&u)) - &one) + &(&fe([2, 0, 0, 0]) * &inv(&w)),
        ),
        (7, "g_p7", "-1/u^2", -inv(&u2)),
        (8, "g_p5", "ω/u + 1/u^2", &(&w * &inv(&u)) + &inv(&u2)),
        (9, "g_p9", "ω", w.clone()),
        (10, "g_p10", "1", one),
    ];
    rows.into_iter()
        .map(|(row, key, printed, point)| FixedPointRow {
            row,
            key,
            printed,
            point,
        })
        .collect()
}

/// Checks g(∞) = p exactly for every row of the fixed point table.
pub fn verify_fixed_points() -> Result<Report, RepError> {
    let cat = catalog();
    let rep = gamma53333_rep();
    let mut r = Report::default();
    for row in fixed_point_rows() {
        let g = rep.evaluate(cat.word(row.key)?)?;
        let got = mobius_apply(&g, &BoundaryPoint::Infinity);
        let want = BoundaryPoint::Finite(row.point.clone());
        r.push(Check::new(
            format!(
                "fixed point row {} ({} maps ∞ to {})",
                row.row, row.key, row.printed
            ),
            show_point(&want),
            show_point(&got),
            got == want,
        ));
    }
    Ok(r)
}

/// The index-2 embedding x ↦ x', y ↦ y', z ↦ z'y'z'.
pub fn verify_embedding(opts: EnumerationOptions) -> Result<Report, RepError> {
    let cat = catalog();
    let g = cat.presentation("gamma53333")?;
    let gp = cat.presentation("gamma522623")?;
    let rep = gamma53333_rep();
    let repp = gamma522623_rep();
    let images: Vec<Word> = ["embed.x", "embed.y", "embed.z"]
        .iter()
        .map(|k| cat.word(k).cloned())
        .collect::<Result<_, _>>()?;
    let mut r = Report::default();
    for (i, img) in images.iter().enumerate() {
        let lhs = twist(&rep.matrices[i]);
        let rhs = repp.evaluate(img)?;
        r.push(Check::new(
            format!("embedding {} ↦ {}", g.names()[i], gp.display_word(img)),
            "equal up to sign",
            if lhs == rhs { "equal" } else { "different" },
            lhs == rhs,
        ));
    }
    for w in g.relators() {
        let img = w.substitute(&images)?;
        let m = repp.evaluate(&img)?;
        let ok = m.is_identity();
        r.push(Check::new(
            format!("embedded relator {}", g.display_word(w)),
            "±I",
            show_matrix(&m, ok),
            ok,
        ));
    }
    let t = enumerate_cosets(gp, &images, opts)?;
    r.push(Check::new(
        "index of ⟨x', y', z'y'z'⟩",
        "2",
        t.index().map_or("exceeded".into(), |i| i.to_string()),
        t.index() == Some(2),
    ));
    Ok(r)
}

/// Complex conjugation fixes x and swaps y and z; the letter swap y ↔ z
/// permutes the relators.
pub fn galois_symmetry_check() -> Result<Report, RepError> {
    let cat = catalog();
    let g = cat.presentation("gamma53333")?;
    let rep = gamma53333_rep();
    let mut r = Report::default();
    let m = |i: usize| rep.matrices[i].clone();
    let pairs = [(0, 0, "x"), (1, 2, "y"), (2, 1, "z")];
    for (src, dst, name) in pairs {
        let c = m(src).complex_conjugate();
        let ok = c == m(dst) || c == m(dst).inverse();
        r.push(Check::new(
            format!("conj({name}-matrix)"),
            format!("{}-matrix", g.names()[dst]),
            if ok { "equal up to sign" } else { "different" },
            ok,
        ));
    }
    let swap = vec![Word::generator(0), Word::generator(2), Word::generator(1)];
    let keys: Vec<_> = g.relators().iter().map(|w| relator_key(g, w)).collect();
    for w in g.relators() {
        let s = w.substitute(&swap)?;
        let ok = keys.contains(&relator_key(g, &s));
        r.push(Check::new(
            format!("y↔z image of {}", g.display_word(w)),
            "a relator up to rotation and inversion",
            g.display_word(&s).to_string(),
            ok,
        ));
    }
    Ok(r)
}

// least cyclic rotation of the word or its inverse, after normalizing involutions
fn relator_key(p: &Presentation, w: &Word) -> Vec<(usize, bool)> {
    let mut best: Option<Vec<(usize, bool)>> = None;
    for v in [p.normalize(w), p.normalize(&w.inverse())] {
        let ls: Vec<_> = v
            .letters()
            .iter()
            .map(|l| (l.generator, l.inverse))
            .collect();
        for i in 0..ls.len().max(1) {
            let rot: Vec<_> = ls[i.min(ls.len())..]
                .iter()
                .chain(&ls[..i.min(ls.len())])
                .copied()
                .collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// The identities behind the normalization of a knot group at 0 and ∞.
pub fn verify_normalization() -> Result<Report, RepError> {
    let cat = catalog();
    let rep = gamma53333_rep();
    let ev = |k: &str| -> Result<ProjMatrix, RepError> { rep.evaluate(cat.word(k)?) };
    let u = FieldElement::u();
    let w = FieldElement::omega();
    let mut r = Report::default();

    let t = ev("m_inf_0")?.mul(&ev("m_p1_2")?).trace();
    let want = -inv(&u);
    let ok = t == want || t == -&want;
    r.push(Check::new(
        "trace(m_inf_0 m_p1_2)",
        format!("±({want})"),
        t.to_string(),
        ok,
    ));
    let prod = ev("m_inf_0")?.mul(&ev("m_p1_2")?);
    let kind = classify_isometry(&prod, DEFAULT_ORDER_BOUND);
    r.push(Check::new(
        "m_inf_0 m_p1_2",
        Isometry::Elliptic(5).to_string(),
        kind.to_string(),
        kind == Isometry::Elliptic(5),
    ));

    let c = -(&(&u * &u) * &(&w * &w));
    let lower = ProjMatrix::new(
        FieldElement::one(),
        FieldElement::zero(),
        c,
        FieldElement::one(),
    );
    let m = ev("m_p1_1")?;
    r.push(Check::new(
        "m_p1_1^-1",
        lower.to_string(),
        m.inverse().to_string(),
        m.inverse() == lower,
    ));

    // conjugation by y z^-1 permutes the six translations ±1, ±ω, ±ω²
    let rot = rep
        .evaluate(&Word::generator(1))?
        .mul(&rep.evaluate(&Word::generator(2))?.inverse());
    let mut six = Vec::new();
    for j in 0..3 {
        let m = ev(&format!("m_inf_{j}"))?;
        six.push(m.inverse());
        six.push(m);
    }
    let moved: Vec<_> = six.iter().map(|m| rot.mul(m).mul(&rot.inverse())).collect();
    let ok = moved.iter().all(|m| six.contains(m)) && six.iter().all(|m| moved.contains(m));
    r.push(Check::new(
        "y z^-1 permutes m_inf_j^±1",
        "same set",
        if ok { "same set" } else { "different set" },
        ok,
    ));

    for key in [
        "gamma_s.a",
        "gamma_s.f",
        "gamma_s.h",
        "gamma_s.o",
        "gamma_s.u",
    ] {
        let kind = classify_isometry(&ev(key)?, DEFAULT_ORDER_BOUND);
        r.push(Check::new(
            key,
            "parabolic",
            kind.to_string(),
            kind == Isometry::Parabolic,
        ));
    }
    let a = ev("gamma_s.a")?;
    let t1 = ProjMatrix::new(
        FieldElement::one(),
        FieldElement::one(),
        FieldElement::zero(),
        FieldElement::one(),
    );
    r.push(Check::new(
        "gamma_s.a matrix",
        t1.to_string(),
        a.to_string(),
        a == t1,
    ));
    Ok(r)
}

/// The full representation suite.
pub fn verify_representation(opts: EnumerationOptions) -> Result<Report, RepError> {
    let cat = catalog();
    let mut r = verify_relator_kernel(
        "gamma53333",
        cat.presentation("gamma53333")?,
        &gamma53333_rep(),
    )?;
    r.extend(verify_relator_kernel(
        "gamma522623",
        cat.presentation("gamma522623")?,
        &gamma522623_rep(),
    )?);
    r.extend(verify_meridians()?);
    r.extend(verify_fixed_points()?);
    r.extend(verify_embedding(opts)?);
    r.extend(galois_symmetry_check()?);
    r.extend(verify_normalization()?);
    Ok(r)
}

/// A short product of subgroup generators that has finite order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionCertificate {
    /// (generator position, inverted) for each factor.
    pub factors: Vec<(usize, bool)>,
    pub order: u32,
}

impl TorsionCertificate {
    pub fn word(&self, gens: &[Word]) -> Word {
        self.factors
            .iter()
            .fold(Word::identity(), |acc, &(i, inv)| {
                acc.mul(&if inv {
                    gens[i].inverse()
                } else {
                    gens[i].clone()
                })
            })
    }

    /// e.g. `m_p1_1*m_p4_1^-1` given labels for the generators.
    pub fn describe(&self, labels: &[String]) -> String {
        self.factors
            .iter()
            .map(|&(i, inv)| {
                if inv {
                    format!("{}^-1", labels[i])
                } else {
                    labels[i].clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

pub const DEFAULT_TORSION_DEPTH: usize = 3;

/// Searches products of at most `depth` generators and inverses of
/// Γ(5,2,2,3,3,3) words for an elliptic element.
///
/// Products involving later generators are tried first: for k from the last
/// generator down, words over the first k + 1 generators that use the k-th,
/// shortest first, then in order of (position, inverted). Since subgroups
/// grow by appending generators, a certificate names the newest one that
/// makes it possible.
pub fn torsion_certificate(
    gens: &[Word],
    depth: usize,
) -> Result<Option<TorsionCertificate>, RepError> {
    let rep = gamma53333_rep();
    let exact: Vec<[ProjMatrix; 2]> = gens
        .iter()
        .map(|g| rep.evaluate(g).map(|m| [m.clone(), m.inverse()]))
        .collect::<Result<_, _>>()?;
    let approx: Vec<[C2; 2]> = exact
        .iter()
        .map(|[m, mi]| [m.to_complex(), mi.to_complex()])
        .collect();
    // the floating point search only proposes; every hit is confirmed exactly
    let confirm = |factors: &[(usize, bool)]| {
        let m = factors
            .iter()
            .fold(ProjMatrix::identity(), |acc, &(i, inv)| {
                acc.mul(&exact[i][usize::from(inv)])
            });
        match classify_isometry(&m, DEFAULT_ORDER_BOUND) {
            Isometry::Elliptic(n) => Some(n),
            _ => None,
        }
    };
    for k in (0..approx.len()).rev() {
        for len in 1..=depth {
            let mut factors = Vec::with_capacity(len);
            let id = [
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ];
            if let Some(order) = search(&approx[..=k], len, &id, &mut factors, false, &confirm) {
                return Ok(Some(TorsionCertificate { factors, order }));
            }
        }
    }
    Ok(None)
}

type C64 = num_complex::Complex64;
type C2 = [C64; 4];

fn cmul(a: &C2, b: &C2) -> C2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

// a real trace of absolute value below 2, with generous slack
fn maybe_elliptic(m: &C2) -> bool {
    let t = m[0] + m[3];
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-6 * scale;
    t.im.abs() < tol && t.re.abs() < 2.0 - 1e-9
}

// fills `factors` up to `len` letters; the last generator must appear
fn search(
    mats: &[[C2; 2]],
    len: usize,
    prefix: &C2,
    factors: &mut Vec<(usize, bool)>,
    used_last: bool,
    confirm: &dyn Fn(&[(usize, bool)]) -> Option<u32>,
) -> Option<u32> {
    if factors.len() == len {
        if used_last && maybe_elliptic(prefix) {
            return confirm(factors);
        }
        return None;
    }
    let last = mats.len() - 1;
    for (i, m) in mats.iter().enumerate() {
        for inverted in [false, true] {
            if factors.last() == Some(&(i, !inverted)) {
                continue;
            }
            // the remaining slots must still be able to use the last generator
            if !used_last && i != last && factors.len() + 1 == len {
                continue;
            }
            factors.push((i, inverted));
            let p = cmul(prefix, &m[usize::from(inverted)]);
            if let Some(n) = search(mats, len, &p, factors, used_last || i == last, confirm) {
                return Some(n);
            }
            factors.pop();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: &str) -> Word {
        catalog().word(k).unwrap().clone()
    }

    #[test]
    fn determinants_are_one() {
        for m in &gamma53333_rep().matrices {
            assert!(m.det().is_one());
        }
        for m in &gamma522623_rep().matrices {
            assert_eq!(m.det(), TwistedElement::one());
        }
    }

    #[test]
    fn relators_vanish() {
        let cat = catalog();
        assert!(verify_relator_kernel(
            "g",
            cat.presentation("gamma53333").unwrap(),
            &gamma53333_rep()
        )
        .unwrap()
        .pass());
        assert!(verify_relator_kernel(
            "g'",
            cat.presentation("gamma522623").unwrap(),
            &gamma522623_rep()
        )
        .unwrap()
        .pass());
        // x has order 5, not 4
        let bad = Presentation::parse(&["x", "y", "z"], &["x^4"]).unwrap();
        assert!(!verify_relator_kernel("bad", &bad, &gamma53333_rep())
            .unwrap()
            .pass());
    }

    #[test]
    fn x_to_the_fifth_by_direct_powers() {
        let x = gamma53333_rep().matrices[0].clone();
        assert!(x.pow(5).is_identity());
        assert!(!x.pow(4).is_identity());
    }

    #[test]
    fn meridian_matrices() {
        assert!(verify_meridians().unwrap().pass());
        let rep = gamma53333_rep();
        let m = rep.evaluate(&w("m_inf_0")).unwrap();
        assert_eq!(m.entries()[1], FieldElement::one());
    }

    #[test]
    fn mobius_examples() {
        let rep = gamma53333_rep();
        let y = rep.evaluate(&Word::generator(1)).unwrap();
        let x = rep.evaluate(&Word::generator(0)).unwrap();
        assert_eq!(
            mobius_apply(&y, &BoundaryPoint::Infinity),
            BoundaryPoint::Finite(FieldElement::zero())
        );
        assert_eq!(
            mobius_apply(&x, &BoundaryPoint::Infinity),
            BoundaryPoint::Finite(FieldElement::one())
        );
    }

    #[test]
    fn classification_examples() {
        let rep = gamma53333_rep();
        let yz = rep
            .evaluate(
                &catalog()
                    .presentation("gamma53333")
                    .unwrap()
                    .parse_word("y z^-1")
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(classify_isometry(&yz, 12), Isometry::Elliptic(3));
        let m = rep.evaluate(&w("m_inf_0")).unwrap();
        assert_eq!(classify_isometry(&m, 12), Isometry::Parabolic);
    }

    #[test]
    fn fixed_points_other_than_row_two_match() {
        let r = verify_fixed_points().unwrap();
        assert_eq!(r.checks.len(), 10);
        let failing: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
        assert_eq!(failing.len(), 1, "{failing:?}");
        assert!(failing[0].starts_with("fixed point row 2 "));
    }

    #[test]
    fn row_two_lands_on_omega_bar_over_u() {
        let rep = gamma53333_rep();
        let g = rep.evaluate(&w("g_p2")).unwrap();
        let want = &FieldElement::omega().inv().unwrap() * &FieldElement::u().inv().unwrap();
        assert_eq!(
            mobius_apply(&g, &BoundaryPoint::Infinity),
            BoundaryPoint::Finite(want)
        );
    }

    #[test]
    fn embedding_and_symmetry() {
        assert!(verify_embedding(EnumerationOptions::default())
            .unwrap()
            .pass());
        assert!(galois_symmetry_check().unwrap().pass());
        assert!(verify_normalization().unwrap().pass());
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(torsion_certificate(&[w("m_inf_0")], 3).unwrap(), None);
        let c = torsion_certificate(&[w("m_inf_0"), w("m_p1_2")], 3)
            .unwrap()
            .unwrap();
        assert_eq!(c.order, 5);
        assert_eq!(c.factors, vec![(0, false), (1, false)]);
        let gens = [
            w("m_inf_0"),
            w("m_p1_1"),
            w("m_p2_2"),
            w("m_p3_2"),
            w("m_p4_1"),
        ];
        let c = torsion_certificate(&gens, 3).unwrap().unwrap();
        assert_eq!(c.factors, vec![(1, false), (4, false)]);
        assert_eq!(c.order, 5);
        let rep = gamma53333_rep();
        assert_eq!(
            classify_isometry(&rep.evaluate(&c.word(&gens)).unwrap(), 12),
            Isometry::Elliptic(5)
        );
        assert_eq!(torsion_certificate(&gens, 1).unwrap(), None);
    }

    // exact search in the same order, no floating point
    fn exact_certificate(gens: &[Word], depth: usize) -> Option<TorsionCertificate> {
        let rep = gamma53333_rep();
        let mats: Vec<ProjMatrix> = gens.iter().map(|g| rep.evaluate(g).unwrap()).collect();
        let n = mats.len();
        for k in (0..n).rev() {
            for len in 1..=depth {
                let letters: Vec<(usize, bool)> =
                    (0..=k).flat_map(|i| [(i, false), (i, true)]).collect();
                let mut idx = vec![0usize; len];
                loop {
                    let f: Vec<(usize, bool)> = idx.iter().map(|&i| letters[i]).collect();
                    let reduced = f.windows(2).all(|p| p[0].0 != p[1].0 || p[0].1 == p[1].1);
                    if reduced && f.iter().any(|l| l.0 == k) {
                        let m = f.iter().fold(ProjMatrix::identity(), |a, &(i, inv)| {
                            a.mul(&if inv {
                                mats[i].inverse()
                            } else {
                                mats[i].clone()
                            })
                        });
                        if let Isometry::Elliptic(order) = classify_isometry(&m, 12) {
                            return Some(TorsionCertificate { factors: f, order });
                        }
                    }
                    let mut p = len;
                    loop {
                        if p == 0 {
                            break;
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] < letters.len() {
                            break;
                        }
                        idx[p] = 0;
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
        }
        None
    }

    #[test]
    fn approximate_search_agrees_with_exact() {
        let sets: Vec<Vec<&str>> = vec![
            vec!["m_inf_0", "m_p1_1", "m_p2_2", "m_p3_2", "m_p4_1"],
            vec!["m_inf_0", "m_p1_1", "m_p2_0"],
            vec!["m_inf_0", "m_p1_2"],
            vec!["m_inf_0", "m_p1_1", "m_p2_0", "m_p3_0", "m_p4_2"],
            vec!["gamma_s.a", "gamma_s.f", "gamma_s.h"],
        ];
        for s in sets {
            let gens: Vec<Word> = s.iter().map(|k| w(k)).collect();
            assert_eq!(
                torsion_certificate(&gens, 2).unwrap(),
                exact_certificate(&gens, 2),
                "{s:?}"
            );
        }
    }

    #[test]
    fn unassigned_generator() {
        let rep = gamma53333_rep();
        assert_eq!(
            rep.evaluate(&Word::generator(5)),
            Err(RepError::Unassigned(5))
        );
    }
}
