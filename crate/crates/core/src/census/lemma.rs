use serde::Serialize;

use super::{
    conjugacy_classify, conjugator_into, embed_in_gamma_prime, knot_group_test,
    representative_tables, run_plan, subgroup_table, CensusConfig, CensusRow, KnotClass,
    KnotVerdict, PlanRow, Result,
};
use crate::coset::{enumerate_cosets, CosetTable};
use crate::field::{classify_isometry, Isometry, DEFAULT_ORDER_BOUND};
use crate::fp::{catalog, Word};
use crate::representation::{gamma53333_rep, Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub gamma: usize,
    pub gamma_prime: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub pass: bool,
    pub classes: ClassCounts,
    pub checks: Vec<Check>,
    pub rows: Vec<CensusRow>,
}

impl LemmaReport {
    pub fn check(&self, prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name.starts_with(prefix))
    }
}

fn tables_in(host: &str, gens: &[Vec<Word>], cfg: &CensusConfig) -> Result<Vec<CosetTable>> {
    let p = catalog().presentation(host)?;
    gens.iter()
        .map(|g| Ok(enumerate_cosets(p, g, cfg.enumeration)?))
        .collect()
}

fn show_index(t: &CosetTable) -> String {
    t.index().map_or("exceeded".into(), |i| i.to_string())
}

/// Replays the plan and checks the three-class statement in Γ(5,2,2,3,3,3)
/// and the two-class statement in Γ(5,2,2,6,2,3).
pub fn verify_main_lemma(plan: &[PlanRow], cfg: &CensusConfig) -> Result<LemmaReport> {
    let rows = run_plan(plan, cfg)?;
    let mut r = Report::default();

    let matched = rows.iter().filter(|x| x.matches()).count();
    r.push(Check::new(
        "plan replay",
        format!("{} rows match", rows.len()),
        format!("{matched} rows match"),
        matched == rows.len(),
    ));
    for x in rows.iter().filter(|x| !x.matches()) {
        r.push(Check::new(
            format!("plan row {}", x.plan.pattern()),
            format!(
                "index {} {}",
                x.plan.expected_index,
                x.plan
                    .expected_class
                    .map_or(String::new(), |c| c.to_string())
            )
            .trim_end()
            .to_string(),
            format!(
                "index {} {}",
                x.index_label(),
                x.class.map_or(String::new(), |c| c.to_string())
            )
            .trim_end()
            .to_string(),
            false,
        ));
    }

    let knots: Vec<&CensusRow> = rows.iter().filter(|x| x.is_knot).collect();
    let size = |c: KnotClass| knots.iter().filter(|x| x.class == Some(c)).count();
    let sizes = format!(
        "I:{} IIA:{} IIB:{}",
        size(KnotClass::I),
        size(KnotClass::IIA),
        size(KnotClass::IIB)
    );
    r.push(Check::new(
        "knot row class sizes",
        "I:2 IIA:3 IIB:3",
        sizes.clone(),
        sizes == "I:2 IIA:3 IIB:3",
    ));

    let gens: Vec<Vec<Word>> = knots.iter().map(|x| x.plan.generators()).collect();
    let mut counts = ClassCounts {
        gamma: 0,
        gamma_prime: 0,
    };
    if !knots.is_empty() {
        let tabs = tables_in("gamma53333", &gens, cfg)?;
        let c = conjugacy_classify(&tabs, &gens)?;
        counts.gamma = c.class_count();
        // the direct partition must agree with the pinned labels
        let agrees = (0..knots.len()).all(|i| {
            (0..knots.len())
                .all(|j| (c.class_of[i] == c.class_of[j]) == (knots[i].class == knots[j].class))
        });
        r.push(Check::new(
            "classes in gamma53333",
            "3",
            counts.gamma.to_string(),
            counts.gamma == 3 && agrees,
        ));

        let egens: Vec<Vec<Word>> = gens
            .iter()
            .map(|g| embed_in_gamma_prime(g))
            .collect::<Result<_>>()?;
        let etabs = tables_in("gamma522623", &egens, cfg)?;
        let bad: Vec<String> = etabs
            .iter()
            .zip(&knots)
            .filter(|(t, _)| t.index() != Some(120))
            .map(|(t, x)| format!("{}: {}", x.plan.pattern(), show_index(t)))
            .collect();
        r.push(Check::new(
            "index in gamma522623",
            "120 for every knot row",
            if bad.is_empty() {
                "120 for every knot row".into()
            } else {
                bad.join("; ")
            },
            bad.is_empty(),
        ));
        if bad.is_empty() {
            let ce = conjugacy_classify(&etabs, &egens)?;
            counts.gamma_prime = ce.class_count();
            // I stays apart, IIA and IIB merge
            let merged = (0..knots.len()).all(|i| {
                (0..knots.len()).all(|j| {
                    let is_i = |k: usize| knots[k].class == Some(KnotClass::I);
                    (ce.class_of[i] == ce.class_of[j]) == (is_i(i) == is_i(j))
                })
            });
            r.push(Check::new(
                "classes in gamma522623",
                "2 (I, and IIA with IIB)",
                counts.gamma_prime.to_string(),
                counts.gamma_prime == 2 && merged,
            ));
        }
    }

    let cat = catalog();
    let h1 = cat.set("h1")?;
    let h2 = cat.set("h2")?;
    let t1 = subgroup_table(&h1, cfg.enumeration)?;
    let in_gamma = t1.is_closed() && conjugator_into(&t1, &h2)?.is_some();
    r.push(Check::new(
        "H1, H2 conjugate in gamma53333",
        "false",
        in_gamma.to_string(),
        t1.is_closed() && !in_gamma,
    ));
    let e1 = embed_in_gamma_prime(&h1)?;
    let e2 = embed_in_gamma_prime(&h2)?;
    let et1 = enumerate_cosets(cat.presentation("gamma522623")?, &e1, cfg.enumeration)?;
    let in_prime = match conjugator_into(&et1, &e2) {
        Ok(c) => c.is_some(),
        Err(_) => false,
    };
    r.push(Check::new(
        "H1, H2 conjugate in gamma522623",
        "true",
        in_prime.to_string(),
        in_prime,
    ));

    Ok(LemmaReport {
        pass: r.pass(),
        classes: counts,
        checks: r.checks,
        rows,
    })
}

/// ⟨a, f, h, o, u⟩: parabolic generators, index 60, a knot group, conjugate
/// to the class I representative.
pub fn verify_knot_generator_sets(cfg: &CensusConfig) -> Result<Report> {
    let cat = catalog();
    let gens = cat.set("gamma_s.generators")?;
    let rep = gamma53333_rep();
    let mut r = Report::default();
    for (name, w) in ["a", "f", "h", "o", "u"].iter().zip(&gens) {
        let kind = classify_isometry(&rep.evaluate(w)?, DEFAULT_ORDER_BOUND);
        r.push(Check::new(
            format!("gamma_s.{name} is parabolic"),
            Isometry::Parabolic.to_string(),
            kind.to_string(),
            kind == Isometry::Parabolic,
        ));
    }
    let t = subgroup_table(&gens, cfg.enumeration)?;
    r.push(Check::new(
        "index of <a,f,h,o,u>",
        "60",
        show_index(&t),
        t.index() == Some(60),
    ));
    if t.index() != Some(60) {
        return Ok(r);
    }
    let ev = knot_group_test(&t, &gens, cfg)?;
    r.push(Check::new(
        "<a,f,h,o,u> knot test",
        "Knot",
        format!(
            "{:?} (quotient order {:?}, abelianization {})",
            ev.verdict, ev.quotient_order, ev.abelianization
        ),
        ev.verdict == KnotVerdict::Knot,
    ));
    let reps = representative_tables(cfg)?;
    let (_, _, ti) = reps
        .iter()
        .find(|(c, _, _)| *c == KnotClass::I)
        .expect("class I pinned");
    let g = conjugator_into(ti, &gens)?;
    let names = cat.presentation("gamma53333")?.names();
    r.push(Check::new(
        "<a,f,h,o,u> conjugate to class I",
        "true",
        g.as_ref()
            .map_or("false".into(), |g| format!("true, by {}", g.display(names))),
        g.is_some(),
    ));
    Ok(r)
}
