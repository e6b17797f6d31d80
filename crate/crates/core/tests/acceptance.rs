//! The seven acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero when any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dodeca_core::abelian::{smith_normal_form, IntegerMatrix};
use dodeca_core::census::{
    closure_audit, dfs_audit, knot_group_test, run_plan, shipped_plan, verify_knot_generator_sets,
    verify_main_lemma, CensusConfig, ExpectedIndex, KnotClass, KnotVerdict,
};
use dodeca_core::coset::{enumerate_cosets, EnumerationOptions, Strategy};
use dodeca_core::field::{mobius_apply, BoundaryPoint};
use dodeca_core::fp::{catalog, Letter, Word};
use dodeca_core::representation::{
    galois_symmetry_check, gamma53333_rep, verify_embedding, verify_fixed_points, verify_meridians,
    verify_relator_kernel,
};

struct Verdict {
    pass: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Self {
            pass: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn timed(v: &mut Verdict, start: Instant, limit: Duration) {
    let t = start.elapsed();
    v.require(t < limit, format!("took {t:?}, limit {limit:?}"));
    v.note(format!("{t:.2?}"));
}

fn representation_suite() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let cat = catalog();
    for (key, ok) in [
        (
            "gamma53333",
            verify_relator_kernel(
                "g",
                cat.presentation("gamma53333").unwrap(),
                &gamma53333_rep(),
            )
            .unwrap(),
        ),
        (
            "gamma522623",
            verify_relator_kernel(
                "g'",
                cat.presentation("gamma522623").unwrap(),
                &dodeca_core::representation::gamma522623_rep(),
            )
            .unwrap(),
        ),
    ] {
        v.require(ok.checks.len() == 6 && ok.pass(), format!("{key} relators"));
    }
    v.require(verify_meridians().unwrap().pass(), "meridian matrices");
    let fp = verify_fixed_points().unwrap();
    for c in fp.failures() {
        v.require(false, format!("{}: computed {}", c.name, c.computed));
    }
    v.require(fp.checks.len() == 10, "ten fixed point rows");
    v.require(
        verify_embedding(EnumerationOptions::default())
            .unwrap()
            .pass(),
        "embedding index 2",
    );
    timed(&mut v, start, Duration::from_secs(1));
    v
}

fn table_replay() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let rows = run_plan(&shipped_plan(), &CensusConfig::default()).unwrap();
    timed(&mut v, start, Duration::from_secs(60));
    v.require(rows.len() == 45, "45 rows");
    let ones = rows.iter().filter(|r| r.index == Some(1)).count();
    let knots = rows
        .iter()
        .filter(|r| r.index == Some(60) && r.is_knot)
        .count();
    v.require(ones == 36, format!("{ones} rows of index 1, expected 36"));
    v.require(
        knots == 8,
        format!("{knots} knot rows of index 60, expected 8"),
    );
    let size = |c| rows.iter().filter(|r| r.class == Some(c)).count();
    v.require(
        (
            size(KnotClass::I),
            size(KnotClass::IIA),
            size(KnotClass::IIB),
        ) == (2, 3, 3),
        "class sizes I:2 IIA:3 IIB:3",
    );
    let t: Vec<_> = rows.iter().filter(|r| r.torsion.is_some()).collect();
    v.require(
        t.len() == 1
            && t[0].plan.pattern() == "0 1 2 2 1"
            && t[0]
                .torsion
                .as_ref()
                .is_some_and(|c| c.word == "m_p1_1*m_p4_1" && c.order == 5),
        "T row certified by m_p1_1*m_p4_1 of order 5",
    );
    for r in rows.iter().filter(|r| !r.matches()) {
        v.require(
            false,
            format!(
                "row {} expected {} computed {}",
                r.plan.pattern(),
                r.plan.expected_index,
                r.index_label()
            ),
        );
    }
    v
}

fn knot_tests() -> Verdict {
    let mut v = Verdict::new();
    let cfg = CensusConfig::default();
    let g = catalog().presentation("gamma53333").unwrap();
    let rows: Vec<_> = shipped_plan()
        .into_iter()
        .filter(|r| r.expected_index == ExpectedIndex::Index(60))
        .collect();
    v.require(rows.len() == 8, "eight index-60 rows");
    for r in &rows {
        let gens = r.generators();
        let t = enumerate_cosets(g, &gens, cfg.enumeration).unwrap();
        let ev = knot_group_test(&t, &gens, &cfg).unwrap();
        v.require(
            ev.quotient_order == Some(1) && ev.abelian.is_z() && ev.verdict == KnotVerdict::Knot,
            format!(
                "{}: quotient {:?}, abelianization {}",
                r.pattern(),
                ev.quotient_order,
                ev.abelianization
            ),
        );
    }
    let all = vec![Word::generator(0), Word::generator(1), Word::generator(2)];
    let t = enumerate_cosets(g, &all, cfg.enumeration).unwrap();
    let ev = knot_group_test(&t, &all, &cfg).unwrap();
    v.require(
        ev.verdict == KnotVerdict::NotKnot,
        "the whole group must fail the knot test",
    );
    v
}

fn main_lemma() -> Verdict {
    let mut v = Verdict::new();
    let l = verify_main_lemma(&shipped_plan(), &CensusConfig::default()).unwrap();
    v.require(
        l.classes.gamma == 3,
        format!("{} classes in gamma53333", l.classes.gamma),
    );
    v.require(
        l.classes.gamma_prime == 2,
        format!("{} classes in gamma522623", l.classes.gamma_prime),
    );
    for name in [
        "classes in gamma53333",
        "index in gamma522623",
        "classes in gamma522623",
        "H1, H2 conjugate in gamma53333",
        "H1, H2 conjugate in gamma522623",
    ] {
        let c = l.check(name);
        v.require(
            c.is_some_and(|c| c.pass),
            format!("{name}: {:?}", c.map(|c| &c.computed)),
        );
    }
    v
}

fn knot_generator_set() -> Verdict {
    let mut v = Verdict::new();
    let r = verify_knot_generator_sets(&CensusConfig::default()).unwrap();
    for c in r.failures() {
        v.require(false, format!("{}: {}", c.name, c.computed));
    }
    v.require(r.checks.len() == 8, "all checks ran");
    v
}

fn audit() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let cfg = CensusConfig::default();
    let g = catalog().presentation("gamma53333").unwrap();
    let rows = run_plan(&shipped_plan(), &cfg).unwrap();
    let knots: Vec<_> = rows.iter().filter(|r| r.is_knot).collect();
    v.require(knots.len() == 8, format!("{} knot rows", knots.len()));
    for r in knots {
        let t = enumerate_cosets(g, &r.plan.generators(), cfg.enumeration).unwrap();
        let c = closure_audit(&r.plan, &t, &cfg).unwrap();
        v.require(c.pass, format!("closure audit of {}", c.pattern));
    }
    let d = dfs_audit(&cfg).unwrap();
    v.require(
        d.classes == KnotClass::ALL,
        format!("dfs classes {:?}", d.classes),
    );
    v.require(
        d.class_count == 3,
        format!("dfs found {} classes", d.class_count),
    );
    for u in &d.unresolved {
        v.require(false, format!("UNRESOLVED branch {u}"));
    }
    timed(&mut v, start, Duration::from_secs(600));
    v
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let n = rng.gen_range(1..=max_len);
    Word::new((0..n).map(|_| Letter::new(rng.gen_range(0..3), rng.gen_bool(0.5))))
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

// gcd of all k×k minors
fn minor_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rs in subsets(m.len(), k) {
        for cs in subsets(m[0].len(), k) {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn property_suites() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cfg = CensusConfig::default();
    let g = catalog().presentation("gamma53333").unwrap();

    // strategy independence on the full plan
    let plan = shipped_plan();
    let felsch = CensusConfig {
        enumeration: EnumerationOptions {
            strategy: Strategy::Felsch,
            ..cfg.enumeration
        },
        ..cfg
    };
    let a = run_plan(&plan, &cfg).unwrap();
    let b = run_plan(&plan, &felsch).unwrap();
    for (x, y) in a.iter().zip(&b) {
        v.require(
            x.index == y.index,
            format!("strategy changes index of {}", x.plan.pattern()),
        );
        if x.index.is_some() {
            let tx = enumerate_cosets(g, &x.plan.generators(), cfg.enumeration).unwrap();
            let ty = enumerate_cosets(g, &x.plan.generators(), felsch.enumeration).unwrap();
            v.require(
                tx.to_csv().unwrap() == ty.to_csv().unwrap(),
                format!(
                    "strategy changes the standardized table of {}",
                    x.plan.pattern()
                ),
            );
        }
    }

    // Smith normal form on random 4x4 matrices
    for case in 0..100 {
        let m: Vec<Vec<BigInt>> = (0..4)
            .map(|_| {
                (0..4)
                    .map(|_| BigInt::from(rng.gen_range(-12i64..=12)))
                    .collect()
            })
            .collect();
        let d = smith_normal_form(&IntegerMatrix::from_rows(&m));
        let chain = d.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        v.require(
            chain && d.iter().all(|x| !x.is_negative()),
            format!("snf case {case}: divisibility chain"),
        );
        let mut prod = BigInt::from(1);
        for k in 1..=4 {
            prod *= &d[k - 1];
            v.require(
                prod == minor_gcd(&m, k),
                format!("snf case {case}: {k}x{k} minor gcd"),
            );
        }
    }

    // Möbius action is a homomorphism
    let rep = gamma53333_rep();
    for case in 0..100 {
        let w1 = random_word(&mut rng, 8);
        let w2 = random_word(&mut rng, 8);
        let (m1, m2) = (rep.evaluate(&w1).unwrap(), rep.evaluate(&w2).unwrap());
        let m12 = rep.evaluate(&w1.mul(&w2)).unwrap();
        v.require(m12 == m1.mul(&m2), format!("mobius case {case}: matrices"));
        for p in [
            BoundaryPoint::Infinity,
            BoundaryPoint::finite(dodeca_core::field::FieldElement::zero()),
        ] {
            v.require(
                mobius_apply(&m12, &p) == mobius_apply(&m1, &mobius_apply(&m2, &p)),
                format!("mobius case {case}: action at {p}"),
            );
        }
    }

    // complex conjugation is the letter swap y <-> z
    v.require(
        galois_symmetry_check().unwrap().pass(),
        "galois and y/z relator checks",
    );
    let swap = vec![Word::generator(0), Word::generator(2), Word::generator(1)];
    for case in 0..100 {
        let w = random_word(&mut rng, 10);
        let lhs = rep.evaluate(&w).unwrap().complex_conjugate();
        let rhs = rep.evaluate(&w.substitute(&swap).unwrap()).unwrap();
        v.require(lhs == rhs, format!("galois case {case}"));
    }

    // inverting any generator leaves every row's index alone
    for (row, base) in plan.iter().zip(&a) {
        let gens = row.generators();
        for i in 0..gens.len() {
            let mut h = gens.clone();
            h[i] = h[i].inverse();
            let t = enumerate_cosets(g, &h, cfg.enumeration).unwrap();
            v.require(
                t.index() == base.index,
                format!(
                    "inverting generator {i} of {} changes the index",
                    row.pattern()
                ),
            );
        }
    }
    v
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("representation suite", representation_suite),
        ("table replay", table_replay),
        ("knot tests", knot_tests),
        ("three and two conjugacy classes", main_lemma),
        ("gamma_s generating set", knot_generator_set),
        ("closure and dfs audit", audit),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} ({name}) {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.notes.join("; ")
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
