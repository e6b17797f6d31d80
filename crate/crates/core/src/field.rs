//! Exact arithmetic in F = Q(u, ω), where u² = u + 1 (u = 2cos(π/5)) and
//! ω² = ω − 1 (ω = (1 + √−3)/2), and 2×2 matrices over F up to sign.
//!
//! Elements are stored as A + B·ω with A, B in Q(u); the public coordinates
//! are the four rationals over the basis {1, u, ω, uω}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
}

pub const U_APPROX: f64 = 1.618_033_988_749_895;

fn omega_approx() -> Complex64 {
    Complex64::new(0.5, 3f64.sqrt() / 2.0)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element p + q·u of Q(u).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
struct Qu {
    p: BigRational,
    q: BigRational,
}

impl Qu {
    fn new(p: BigRational, q: BigRational) -> Self {
        Self { p, q }
    }

    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(&self.p + &o.p, &self.q + &o.q)
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.p - &o.p, &self.q - &o.q)
    }

    fn neg(&self) -> Self {
        Self::new(-&self.p, -&self.q)
    }

    // (p1 + q1 u)(p2 + q2 u) = p1p2 + q1q2 + (p1q2 + q1p2 + q1q2) u
    fn mul(&self, o: &Self) -> Self {
        let qq = &self.q * &o.q;
        Self::new(&self.p * &o.p + &qq, &self.p * &o.q + &self.q * &o.p + qq)
    }

    // (p + q u)^-1 = (p + q − q u) / (p² + pq − q²)
    fn inv(&self) -> Option<Self> {
        let n = &self.p * &self.p + &self.p * &self.q - &self.q * &self.q;
        if n.is_zero() {
            return None;
        }
        Some(Self::new((&self.p + &self.q) / &n, -&self.q / &n))
    }

    fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * U_APPROX
    }
}

/// An exact element of Q(u, ω).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    a: Qu,
    b: Qu,
}

impl FieldElement {
    fn from_parts(a: Qu, b: Qu) -> Self {
        Self { a, b }
    }

    /// The element c0 + c1·u + c2·ω + c3·uω.
    pub fn new(c: [BigRational; 4]) -> Self {
        let [c0, c1, c2, c3] = c;
        Self::from_parts(Qu::new(c0, c1), Qu::new(c2, c3))
    }

    /// Integer coordinates, for literals in tests and tables.
    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::new(c.map(rat))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ints([n, 0, 0, 0])
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new([
            r,
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    pub fn u() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    pub fn omega() -> Self {
        Self::from_ints([0, 0, 1, 0])
    }

    /// Coordinates over {1, u, ω, uω}.
    pub fn coefficients(&self) -> [BigRational; 4] {
        [
            self.a.p.clone(),
            self.a.q.clone(),
            self.b.p.clone(),
            self.b.q.clone(),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    // (A + Bω)^-1 = ((A + B) − Bω) / (A² + AB + B²)
    pub fn inv(&self) -> Result<Self, FieldError> {
        let (a, b) = (&self.a, &self.b);
        let norm = a.mul(a).add(&a.mul(b)).add(&b.mul(b));
        let ni = norm.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(Self::from_parts(a.add(b).mul(&ni), b.neg().mul(&ni)))
    }

    pub fn div(&self, o: &Self) -> Result<Self, FieldError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self, FieldError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// The automorphism fixing u and sending ω to 1 − ω.
    #[must_use]
    pub fn complex_conjugate(&self) -> Self {
        Self::from_parts(self.a.add(&self.b), self.b.neg())
    }

    /// Floating-point shadow, for reports only.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.a.to_f64(), 0.0) + omega_approx() * self.b.to_f64()
    }

    /// Whether the first nonzero coordinate is positive (zero counts as positive).
    pub fn is_sign_positive(&self) -> bool {
        self.coefficients()
            .iter()
            .find(|c| !c.is_zero())
            .is_none_or(|c| c.is_positive())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement::from_parts(self.a.add(&o.a), self.b.add(&o.b))
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement::from_parts(self.a.sub(&o.a), self.b.sub(&o.b))
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::from_parts(self.a.neg(), self.b.neg())
    }
}

// (A1 + B1ω)(A2 + B2ω) = A1A2 − B1B2 + (A1B2 + B1A2 + B1B2)ω
impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        let bb = self.b.mul(&o.b);
        FieldElement::from_parts(
            self.a.mul(&o.a).sub(&bb),
            self.a.mul(&o.b).add(&self.b.mul(&o.a)).add(&bb),
        )
    }
}

macro_rules! by_value {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $f(self, o: $t) -> $t { $tr::$f(&self, &o) }
        }
    )*};
}
by_value!(FieldElement, Add add, Sub sub, Mul mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    /// Rational combination of 1, u, ω, uω, e.g. `1/2 - u + 3uω`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, basis) in self.coefficients().iter().zip(["", "u", "ω", "uω"]) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if basis.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(basis)?;
            } else {
                write!(f, "{mag}{basis}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Renders a complex number for reports, e.g. `0.309017 - 0.535233i`.
pub fn format_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!(
            "{re:.6} {} {:.6}i",
            if im < 0.0 { '-' } else { '+' },
            im.abs()
        )
    }
}

/// The ring operations a matrix entry needs.
pub trait Scalar: Clone + Eq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Whether the first nonzero coordinate is positive.
    fn is_sign_positive(&self) -> bool;
}

impl Scalar for FieldElement {
    fn zero() -> Self {
        FieldElement::zero()
    }
    fn one() -> Self {
        FieldElement::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn is_sign_positive(&self) -> bool {
        FieldElement::is_sign_positive(self)
    }
}

/// An element re + im·t of F(t), t² = −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistedElement {
    pub re: FieldElement,
    pub im: FieldElement,
}

impl TwistedElement {
    pub fn real(re: FieldElement) -> Self {
        Self {
            re,
            im: FieldElement::zero(),
        }
    }

    pub fn imaginary(im: FieldElement) -> Self {
        Self {
            re: FieldElement::zero(),
            im,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.re.to_complex() + Complex64::i() * self.im.to_complex()
    }
}

impl Scalar for TwistedElement {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(FieldElement::one())
    }
    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
    fn neg(&self) -> Self {
        Self {
            re: -&self.re,
            im: -&self.im,
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_sign_positive(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_sign_positive()
        } else {
            self.re.is_sign_positive()
        }
    }
}

/// A 2×2 matrix up to sign, stored with its first nonzero entry's first
/// nonzero coordinate positive so that equality is projective equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2<K> {
    e: [K; 4],
}

/// Matrices over Q(u, ω) up to sign.
pub type ProjMatrix = Mat2<FieldElement>;

impl<K: Scalar> Mat2<K> {
    /// `[[a, b], [c, d]]`, sign-normalized.
    pub fn new(a: K, b: K, c: K, d: K) -> Self {
        let e = [a, b, c, d];
        let flip = e
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| !x.is_sign_positive());
        Self {
            e: if flip { e.map(|x| x.neg()) } else { e },
        }
    }

    pub fn identity() -> Self {
        Self::new(K::one(), K::zero(), K::zero(), K::one())
    }

    /// Entries `[a, b, c, d]` of the canonical representative.
    pub fn entries(&self) -> &[K; 4] {
        &self.e
    }

    #[must_use]
    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        Self::new(
            a.mul(p).add(&b.mul(r)),
            a.mul(q).add(&b.mul(s)),
            c.mul(p).add(&d.mul(r)),
            c.mul(q).add(&d.mul(s)),
        )
    }

    /// Adjugate; the inverse for determinant-one matrices.
    #[must_use]
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.e;
        Self::new(d.clone(), b.neg(), c.neg(), a.clone())
    }

    pub fn det(&self) -> K {
        let [a, b, c, d] = &self.e;
        a.mul(d).sub(&b.mul(c))
    }

    /// Trace of the canonical representative.
    pub fn trace(&self) -> K {
        self.e[0].add(&self.e[3])
    }

    #[must_use]
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Applies `f` entrywise.
    pub fn map<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Mat2<L> {
        let [a, b, c, d] = &self.e;
        Mat2::new(f(a), f(b), f(c), f(d))
    }
}

/// Equality in PSL(2): `A = ±B`.
pub fn psl_equal<K: Scalar>(a: &Mat2<K>, b: &Mat2<K>) -> bool {
    a == b
}

impl ProjMatrix {
    pub fn complex_conjugate(&self) -> Self {
        self.map(FieldElement::complex_conjugate)
    }

    /// Entries as complex numbers.
    pub fn to_complex(&self) -> [Complex64; 4] {
        self.e.clone().map(|x| x.to_complex())
    }
}

impl fmt::Display for Mat2<FieldElement> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.e;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// A point of the Riemann sphere F ∪ {∞}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Infinity,
    Finite(FieldElement),
}

impl BoundaryPoint {
    pub fn finite(x: FieldElement) -> Self {
        Self::Finite(x)
    }

    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Self::Infinity => None,
            Self::Finite(x) => Some(x.to_complex()),
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => f.write_str("∞"),
            Self::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// ζ ↦ (aζ + b)/(cζ + d), with ∞ ↦ a/c and the pole ↦ ∞.
pub fn mobius_apply(m: &ProjMatrix, p: &BoundaryPoint) -> BoundaryPoint {
    let [a, b, c, d] = m.entries();
    let (num, den) = match p {
        BoundaryPoint::Infinity => (a.clone(), c.clone()),
        BoundaryPoint::Finite(z) => (&(a * z) + b, &(c * z) + d),
    };
    match num.div(&den) {
        Ok(v) => BoundaryPoint::Finite(v),
        Err(_) => BoundaryPoint::Infinity,
    }
}

/// The kind of isometry of hyperbolic 3-space a matrix induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "lowercase")]
pub enum Isometry {
    Identity,
    Parabolic,
    Elliptic(u32),
    Other,
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::Parabolic => f.write_str("parabolic"),
            Self::Elliptic(n) => write!(f, "elliptic of order {n}"),
            Self::Other => f.write_str("other"),
        }
    }
}

pub const DEFAULT_ORDER_BOUND: u32 = 12;

/// Classifies a determinant-one matrix; elliptic orders are found by powers
/// up to `order_bound`.
pub fn classify_isometry(m: &ProjMatrix, order_bound: u32) -> Isometry {
    if m.is_identity() {
        return Isometry::Identity;
    }
    let two = FieldElement::from_int(2);
    let t = m.trace();
    if t == two || t == -&two {
        return Isometry::Parabolic;
    }
    let mut p = m.clone();
    for n in 2..=order_bound {
        p = p.mul(m);
        if p.is_identity() {
            return Isometry::Elliptic(n);
        }
    }
    Isometry::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(c: [i64; 4]) -> FieldElement {
        FieldElement::from_ints(c)
    }

    /// Inverse by solving the 4×4 system (multiplication-by-x matrix) · v = e1
    /// with Gaussian elimination over Q.
    fn inverse_by_linear_system(x: &FieldElement) -> Option<FieldElement> {
        let basis = [
            fe([1, 0, 0, 0]),
            fe([0, 1, 0, 0]),
            fe([0, 0, 1, 0]),
            fe([0, 0, 0, 1]),
        ];
        let cols: Vec<[BigRational; 4]> = basis.iter().map(|b| (x * b).coefficients()).collect();
        let mut m: Vec<Vec<BigRational>> = (0..4)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..4).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { rat(1) } else { rat(0) });
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            for r in 0..4 {
                if r != col && !m[r][col].is_zero() {
                    let k = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                        *v = &*v - &k * pv;
                    }
                }
            }
        }
        Some(FieldElement::new([
            m[0][4].clone(),
            m[1][4].clone(),
            m[2][4].clone(),
            m[3][4].clone(),
        ]))
    }

    #[test]
    fn defining_relations() {
        let u = FieldElement::u();
        let w = FieldElement::omega();
        assert_eq!(&u * &u, fe([1, 1, 0, 0]));
        assert_eq!(&w * &w, fe([-1, 0, 1, 0]));
        assert_eq!(u.inv().unwrap(), fe([-1, 1, 0, 0]));
        assert_eq!(FieldElement::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn inverse_matches_linear_system() {
        let samples = [
            fe([1, 2, 3, 4]),
            fe([0, 0, 1, 0]),
            fe([-3, 1, 0, 7]),
            fe([5, 0, 0, -2]),
            fe([0, 1, 1, 1]),
        ];
        for x in samples {
            let inv = x.inv().unwrap();
            assert_eq!(Some(inv.clone()), inverse_by_linear_system(&x));
            assert!((&x * &inv).is_one());
        }
    }

    #[test]
    fn conjugation() {
        let u = FieldElement::u();
        let w = FieldElement::omega();
        assert_eq!(u.complex_conjugate(), u);
        assert_eq!(w.complex_conjugate(), fe([1, 0, -1, 0]));
        assert_eq!((&w * &w).complex_conjugate(), -&w);
        let x = fe([1, -2, 3, 5]);
        let y = fe([0, 4, -1, 2]);
        assert_eq!(x.complex_conjugate().complex_conjugate(), x);
        assert_eq!(
            (&x * &y).complex_conjugate(),
            &x.complex_conjugate() * &y.complex_conjugate()
        );
        let z = x.to_complex();
        assert!((x.complex_conjugate().to_complex() - z.conj()).norm() < 1e-9);
    }

    #[test]
    fn numeric_shadow_agrees() {
        let x = fe([1, -2, 3, 5]);
        let y = fe([0, 4, -1, 2]);
        let p = (&x * &y).to_complex();
        assert!((p - x.to_complex() * y.to_complex()).norm() < 1e-9);
        assert!((x.inv().unwrap().to_complex() - 1.0 / x.to_complex()).norm() < 1e-9);
    }

    #[test]
    fn display() {
        assert_eq!(fe([0, 0, 0, 0]).to_string(), "0");
        assert_eq!(fe([1, -1, 0, 3]).to_string(), "1 - u + 3uω");
        assert_eq!(fe([0, 0, -1, 0]).to_string(), "-ω");
        let half =
            FieldElement::new([BigRational::new(1.into(), 2.into()), rat(0), rat(0), rat(0)]);
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(
            format_complex(Complex64::new(0.5, -0.25)),
            "0.500000 - 0.250000i"
        );
    }

    #[test]
    fn projective_sign() {
        let a = ProjMatrix::new(
            fe([-1, 0, 0, 0]),
            fe([0, 1, 0, 0]),
            fe([0, 0, 0, 0]),
            fe([-1, 0, 0, 0]),
        );
        let b = ProjMatrix::new(
            fe([1, 0, 0, 0]),
            fe([0, -1, 0, 0]),
            fe([0, 0, 0, 0]),
            fe([1, 0, 0, 0]),
        );
        assert!(psl_equal(&a, &b));
        let t = ProjMatrix::new(
            fe([1, 0, 0, 0]),
            fe([1, 0, 0, 0]),
            fe([0, 0, 0, 0]),
            fe([1, 0, 0, 0]),
        );
        assert!(!psl_equal(&ProjMatrix::identity(), &t));
        assert_eq!(
            classify_isometry(&t, DEFAULT_ORDER_BOUND),
            Isometry::Parabolic
        );
        assert_eq!(
            classify_isometry(&ProjMatrix::identity(), 12),
            Isometry::Identity
        );
    }

    #[test]
    fn mobius_conventions() {
        let i = ProjMatrix::identity();
        let p = BoundaryPoint::Finite(fe([1, 2, 0, 0]));
        assert_eq!(mobius_apply(&i, &p), p);
        assert_eq!(
            mobius_apply(&i, &BoundaryPoint::Infinity),
            BoundaryPoint::Infinity
        );
        // ζ ↦ 1/ζ swaps 0 and ∞
        let s = ProjMatrix::new(
            fe([0, 0, 0, 0]),
            fe([1, 0, 0, 0]),
            fe([-1, 0, 0, 0]),
            fe([0, 0, 0, 0]),
        );
        assert_eq!(
            mobius_apply(&s, &BoundaryPoint::Finite(FieldElement::zero())),
            BoundaryPoint::Infinity
        );
        assert_eq!(
            mobius_apply(&s, &BoundaryPoint::Infinity),
            BoundaryPoint::Finite(FieldElement::zero())
        );
    }

    #[test]
    fn twisted_scalars() {
        let t = TwistedElement::imaginary(FieldElement::one());
        assert_eq!(t.mul(&t), TwistedElement::real(FieldElement::from_int(-1)));
        let m = Mat2::new(
            TwistedElement::zero(),
            t.clone(),
            t.clone(),
            TwistedElement::zero(),
        );
        assert_eq!(m.det(), TwistedElement::one());
        assert!(m.mul(&m).is_identity());
    }
}
