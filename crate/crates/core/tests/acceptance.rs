//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use involab::alternator::{
    brute_force_s, inseparable_jump, is_direct, lemma_alt_check, septd_suite, totally_decomposable_anisotropic,
    verify_separable_descent, Alternator,
};
use involab::expr::parse_element;
use involab::forms::{determinant_is_square, is_similar_to_pfister, ts_equivalent, BilinearForm, TotallySingularForm};
use involab::suite::q_laws_hold;
use involab::{alternator, AlgebraWithInvolution, FieldElement, FieldTower, Matrix, Subspace, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
    findings: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into(), findings: Vec::new() }
    }
}

fn tower(base: &str, layers: &[&str]) -> FieldTower {
    FieldTower::parse(base, layers).unwrap()
}

fn el(f: &FieldTower, s: &str) -> FieldElement {
    parse_element(f, s).unwrap()
}

fn adjoint(f: &FieldTower, values: &[&str]) -> AlgebraWithInvolution {
    let values: Vec<_> = values.iter().map(|s| el(f, s)).collect();
    AlgebraWithInvolution::matrix_algebra_adjoint(&BilinearForm::diagonal(f, &values)).unwrap()
}

fn adjoint_gram(f: &FieldTower, rows: &[&[&str]]) -> AlgebraWithInvolution {
    let rows = rows.iter().map(|r| r.iter().map(|s| el(f, s)).collect()).collect();
    let b = BilinearForm::new(Matrix::from_rows(f, rows).unwrap()).unwrap();
    AlgebraWithInvolution::matrix_algebra_adjoint(&b).unwrap()
}

fn twisted(f: &FieldTower, a: &str, c: &str, by: &str) -> Option<AlgebraWithInvolution> {
    let q = AlgebraWithInvolution::quaternion(f, &el(f, a), &el(f, c)).ok()?;
    let s = q.parse_element(by).ok()?;
    q.twist(&s).ok()
}

fn labelled_failures<T>(items: &[(String, T)], ok: impl Fn(&T) -> bool) -> Vec<String> {
    items.iter().filter(|(_, x)| !ok(x)).map(|(l, _)| l.clone()).collect()
}

/// S equals the brute-force enumeration on finite instances.
fn oracle_equivalence() -> Outcome {
    let gf2 = tower("GF(2)", &[]);
    let gf4 = tower("GF(4)", &[]);
    let mut instances: Vec<(String, AlgebraWithInvolution)> = vec![
        ("M2(GF2) transpose".into(), adjoint(&gf2, &["1", "1"])),
        ("M2(GF2) [[1,1],[1,0]]".into(), adjoint_gram(&gf2, &[&["1", "1"], &["1", "0"]])),
        ("M2(GF4) <1,g>".into(), adjoint(&gf4, &["1", "g"])),
        ("M2(GF4) <g,g+1>".into(), adjoint(&gf4, &["g", "g+1"])),
        ("M2(GF4) [[1,g],[g,0]]".into(), adjoint_gram(&gf4, &[&["1", "g"], &["g", "0"]])),
        ("M2(GF4) [[g,1],[1,1]]".into(), adjoint_gram(&gf4, &[&["g", "1"], &["1", "1"]])),
        ("M3(GF2) transpose".into(), adjoint(&gf2, &["1", "1", "1"])),
        ("M3(GF2) [[1,1,0],[1,0,0],[0,0,1]]".into(), adjoint_gram(&gf2, &[&["1", "1", "0"], &["1", "0", "0"], &["0", "0", "1"]])),
        ("M4(GF2) transpose".into(), adjoint(&gf2, &["1", "1", "1", "1"])),
        (
            "M4(GF2) H+<1,1>".into(),
            adjoint_gram(&gf2, &[&["0", "1", "0", "0"], &["1", "0", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]]),
        ),
        (
            "M4(GF2) dense".into(),
            adjoint_gram(&gf2, &[&["1", "1", "0", "1"], &["1", "0", "1", "0"], &["0", "1", "1", "0"], &["1", "0", "0", "1"]]),
        ),
        ("M2(GF2) (x) M2(GF2)".into(), adjoint(&gf2, &["1", "1"]).tensor(&adjoint_gram(&gf2, &[&["1", "1"], &["1", "0"]])).unwrap()),
    ];
    for (a, c, by) in [("0", "1", "v"), ("1", "1", "v"), ("1", "1", "uv"), ("0", "1", "1+uv")] {
        if let Some(q) = twisted(&gf2, a, c, by) {
            instances.push((format!("Q({a},{c}) over GF2 twisted by {by}"), q));
        }
    }
    for (a, c) in [("g", "1"), ("g", "g"), ("1", "g+1"), ("0", "g"), ("g+1", "g+1")] {
        instances.push((format!("Q({a},{c}) over GF4 twisted by v"), twisted(&gf4, a, c, "v").unwrap()));
    }
    let q1 = twisted(&gf2, "1", "1", "v").unwrap();
    let q2 = twisted(&gf2, "0", "1", "v").unwrap();
    instances.push(("Q(1,1) (x) Q(0,1) over GF2".into(), q1.tensor(&q2).unwrap()));

    let results: Vec<(String, bool)> = instances
        .iter()
        .map(|(label, a)| {
            let s = Alternator::compute(a).map(|x| x.s().clone());
            let brute = brute_force_s(a);
            (label.clone(), matches!((s, brute), (Ok(s), Ok(b)) if s == b))
        })
        .collect();
    let bad = labelled_failures(&results, |ok| *ok);
    Outcome::new(results.len() >= 20 && bad.is_empty(), format!("{} instances, mismatches {:?}", results.len(), bad))
}

/// `M_2(F2(t))` with the involution adjoint to `⟨1, t⟩`.
fn example_b() -> Outcome {
    let f = tower("GF(2)", &["rat:t"]);
    let a = adjoint(&f, &["1", "t"]);
    let r = alternator(&a, 0, 0).unwrap();
    let x = a.parse_element("t*E12 + E21").unwrap();
    let expected = Subspace::span(&f, 4, &[a.unit().clone(), x.clone()]).unwrap();
    let q_pair = [r.alternator.q(&a, a.unit()), r.alternator.q(&a, &x)];
    let q_ok = q_pair == [Some(f.one()), Some(el(&f, "t"))];
    let form_ok = ts_equivalent(&r.alternator.form(), &TotallySingularForm::new(&f, vec![f.one(), el(&f, "t")]));
    let ok = r.dim_s == 2
        && r.s() == &expected
        && q_ok
        && form_ok
        && r.direct
        && r.decomposable == Verdict::Decomposable(true)
        && r.all_certificates_pass();
    Outcome::new(ok, format!("dim S {}, q(1), q(tE12+E21) = <1, t>: {q_ok}, direct {}, {:?}", r.dim_s, r.direct, r.decomposable))
}

fn inseparable() -> Outcome {
    let f = tower("GF(2)", &["rat:t"]);
    let a = adjoint(&f, &["1", "t"]);
    let k = f.extend_parsed("insep:t").unwrap();
    let j = inseparable_jump(&a, &k).unwrap();
    Outcome::new(
        j.dim_f == 2 && j.dim_k == 3 && j.jumped && j.containment,
        format!("dim S⊗K {} < dim S_K {}, containment {}", j.dim_f, j.dim_k, j.containment),
    )
}

fn extensions_for(f: &FieldTower, var: &str) -> Vec<(String, FieldTower)> {
    let stacks: Vec<Vec<String>> = vec![
        vec![format!("as:{var}")],
        vec!["odd:x^3+x+1".into()],
        vec!["odd:x^5+x^2+1".into()],
        vec![format!("as:{var}"), "odd:x^3+x+1".into()],
        vec!["odd:x^3+x+1".into(), format!("as:{var}")],
    ];
    stacks
        .into_iter()
        .filter_map(|layers| {
            let k = layers.iter().try_fold(f.clone(), |k, l| k.extend_parsed(l)).ok()?;
            Some((layers.join(", "), k))
        })
        .collect()
}

fn separable_descent() -> Outcome {
    let t = tower("GF(2)", &["rat:t"]);
    let st = tower("GF(2)", &["rat:s", "rat:t"]);
    let mut instances: Vec<(String, AlgebraWithInvolution, &str, usize)> = Vec::new();
    for form in [["1", "t"], ["t", "t^2+t+1"], ["1", "t^3+t+1"], ["t+1", "t"], ["1", "1"]] {
        instances.push((format!("adjoint <{}>", form.join(", ")), adjoint(&t, &form), "t", 5));
    }
    for (a, c) in [("t", "s"), ("s+1", "t")] {
        instances.push((format!("Q({a},{c}) twisted by v"), twisted(&st, a, c, "v").unwrap(), "t", 5));
    }
    instances.push(("adjoint <1, s, t, st>".into(), adjoint(&st, &["1", "s", "t", "s*t"]), "t", 2));

    let mut results = Vec::new();
    for (label, a, var, n) in &instances {
        for (ext, k) in extensions_for(a.field(), var).into_iter().take(*n) {
            let ok = verify_separable_descent(a, &k).map(|d| d.equal && d.q_agree && d.containment).unwrap_or(false);
            results.push((format!("{label} over {ext}"), ok));
        }
    }
    let bad = labelled_failures(&results, |ok| *ok);
    Outcome::new(results.len() >= 30 && bad.is_empty(), format!("{} pairs, failures {:?}", results.len(), bad))
}

fn decomposability() -> Outcome {
    let st = tower("GF(2)", &["rat:s", "rat:t"]);
    let a = adjoint(&st, &["1", "s", "t", "s*t"]);
    let r = alternator(&a, 0, 0).unwrap();
    let (verdict, certificates) = totally_decomposable_anisotropic(&a).unwrap();
    let centralizer_ok = a.centralizer(r.s()) == *r.s();
    let positive = verdict == Verdict::Decomposable(true)
        && r.contained_in_sym
        && r.dim_s == 4
        && certificates.iter().all(|c| c.passed)
        && centralizer_ok;

    let stu = tower("GF(2)", &["rat:s", "rat:t", "rat:u"]);
    let b = adjoint(&stu, &["1", "s", "t", "u"]);
    let (verdict_b, _) = totally_decomposable_anisotropic(&b).unwrap();
    let det_square = determinant_is_square(b.adjoint_form().unwrap());
    let negative = verdict_b == Verdict::Decomposable(false) && !det_square;
    Outcome::new(
        positive && negative,
        format!("<1,s,t,st>: {verdict:?} with certificates {certificates:?}; <1,s,t,u>: {verdict_b:?}, det square {det_square}"),
    )
}

fn septd() -> Outcome {
    let t = tower("GF(2)", &["rat:t"]);
    let st = tower("GF(2)", &["rat:s", "rat:t"]);
    let stu = tower("GF(2)", &["rat:s", "rat:t", "rat:u"]);
    let mut instances: Vec<(String, AlgebraWithInvolution, &str)> = Vec::new();
    for form in [&["1", "t"][..], &["t", "t^2+t+1"], &["t+1", "t"], &["t^3+t", "1"]] {
        instances.push((format!("adjoint <{}>", form.join(", ")), adjoint(&t, form), "as:t"));
    }
    for form in [&["s", "t"][..], &["1", "s+t"]] {
        instances.push((format!("adjoint <{}>", form.join(", ")), adjoint(&st, form), "as:s"));
    }
    instances.push(("adjoint <1, s, t, st>".into(), adjoint(&st, &["1", "s", "t", "s*t"]), "as:t"));
    instances.push(("adjoint <s, s*t, s^2, s^2*t>".into(), adjoint(&st, &["s", "s*t", "s^2", "s^2*t"]), "as:s"));
    instances.push(("adjoint <1, s, t, u>".into(), adjoint(&stu, &["1", "s", "t", "u"]), "as:u"));
    instances.push(("adjoint <1, s, t, s+t+st>".into(), adjoint(&st, &["1", "s", "t", "s+t+s*t"]), "as:t"));
    let q = |a: &str, c: &str| twisted(&st, a, c, "v").unwrap();
    instances.push(("Q(t,s) (x) Q(s,t)".into(), q("t", "s").tensor(&q("s", "t")).unwrap(), "as:s"));
    instances.push(("Q(t,s) (x) Q(s+1,t)".into(), q("t", "s").tensor(&q("s+1", "t")).unwrap(), "as:t"));

    let mut disagreements = Vec::new();
    let mut findings = Vec::new();
    let mut compared = 0;
    for (label, a, layer) in &instances {
        let k = a.field().extend_parsed(layer).unwrap();
        let r = septd_suite(a, &k, 200, 1).unwrap();
        if r.verdict_f.as_bool().is_none() {
            continue;
        }
        compared += 1;
        if !r.agree {
            disagreements.push(label.clone());
        }
        if let Some(b) = a.adjoint_form() {
            let pfister = is_similar_to_pfister(b).unwrap();
            if Some(pfister) != r.verdict_f.as_bool() {
                findings.push(format!(
                    "{label}: Pfister closure test says {pfister}, verdict {:?}, determinant square {}",
                    r.verdict_f.as_bool(),
                    determinant_is_square(b)
                ));
            }
        }
    }
    let mut out = Outcome::new(
        compared >= 10 && disagreements.is_empty(),
        format!("{compared} anisotropic instances, F/K disagreements {disagreements:?}, {} Pfister-oracle findings", findings.len()),
    );
    out.findings = findings;
    out
}

fn form_laws() -> Outcome {
    let t = tower("GF(2)", &["rat:t"]);
    let st = tower("GF(2)", &["rat:s", "rat:t"]);
    let gf4 = tower("GF(4)", &[]);
    let instances: Vec<(String, AlgebraWithInvolution)> = vec![
        ("adjoint <1, t>".into(), adjoint(&t, &["1", "t"])),
        ("adjoint <1, 1> over F2(t)".into(), adjoint(&t, &["1", "1"])),
        ("transpose over GF4".into(), adjoint(&gf4, &["1", "1"])),
        ("Q(t,s) twisted by v".into(), twisted(&st, "t", "s", "v").unwrap()),
        ("adjoint <1, s, t, st>".into(), adjoint(&st, &["1", "s", "t", "s*t"])),
        ("Q(t,s) (x) Q(s,t)".into(), twisted(&st, "t", "s", "v").unwrap().tensor(&twisted(&st, "s", "t", "v").unwrap()).unwrap()),
    ];
    let mut results = Vec::new();
    for (i, (label, a)) in instances.iter().enumerate() {
        let alt = Alternator::compute(a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        let lemma = (0..1000).all(|_| {
            let n = rng.gen_range(1..=3);
            let xs: Vec<_> = (0..n).map(|_| a.random_element(&mut rng, 1)).collect();
            lemma_alt_check(a, alt.alt(), &xs)
        });
        let unit = alt.q(a, a.unit()).is_some_and(|q| a.field().is_one(&q));
        let laws = q_laws_hold(a, &alt, &mut rng, 1000);
        results.push((label.clone(), lemma && unit && laws));
    }
    let bad = labelled_failures(&results, |ok| *ok);
    Outcome::new(bad.is_empty(), format!("{} instances x 1000 tuples and 1000 pairs, failures {:?}", results.len(), bad))
}

fn directness_descent() -> Outcome {
    let t = tower("GF(2)", &["rat:t"]);
    let st = tower("GF(2)", &["rat:s", "rat:t"]);
    let stu = tower("GF(2)", &["rat:s", "rat:t", "rat:u"]);
    let mut instances: Vec<(String, AlgebraWithInvolution)> = Vec::new();
    for form in [["1", "t"], ["t", "t^2+t+1"], ["1", "t^3+t+1"], ["t+1", "t"], ["t^3+t", "1"]] {
        instances.push((format!("adjoint <{}>", form.join(", ")), adjoint(&t, &form)));
    }
    for (a, c) in [("t", "s"), ("s+1", "t"), ("s", "t^2+s"), ("t+s", "s*t+1")] {
        instances.push((format!("Q({a},{c}) twisted by v"), twisted(&st, a, c, "v").unwrap()));
    }
    instances.push(("adjoint <1, s, t, u>".into(), adjoint(&stu, &["1", "s", "t", "u"])));
    instances.push(("Q(t,s) (x) Q(s,t)".into(), twisted(&st, "t", "s", "v").unwrap().tensor(&twisted(&st, "s", "t", "v").unwrap()).unwrap()));

    let mut direct = 0;
    let mut results = Vec::new();
    for (label, a) in &instances {
        let over_f = is_direct(a).unwrap();
        direct += usize::from(over_f);
        for layer in ["odd:x^3+x+1", "odd:x^5+x^2+1"] {
            let k = a.field().extend_parsed(layer).unwrap();
            let over_k = is_direct(&a.scalar_extend(&k).unwrap()).unwrap();
            results.push((format!("{label} over {layer}"), over_f == over_k));
        }
    }
    let bad = labelled_failures(&results, |ok| *ok);
    Outcome::new(direct >= 10 && bad.is_empty(), format!("{direct} direct instances, {} checks, failures {:?}", results.len(), bad))
}

fn field_exactness() -> Outcome {
    let kinds: [(&str, &str, &[&str]); 7] = [
        ("finite", "GF(4)", &[]),
        ("rational", "GF(2)", &["rat:s", "rat:t"]),
        ("artin-schreier", "GF(2)", &["rat:t", "as:t"]),
        ("odd", "GF(2)", &["rat:t", "odd:x^3+x+1"]),
        ("odd, non-constant", "GF(2)", &["rat:t", "odd:x^3+t"]),
        ("inseparable", "GF(2)", &["rat:t", "insep:t"]),
        ("composite", "GF(4)", &["rat:s", "rat:t", "insep:s", "as:t"]),
    ];
    let mut results = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (kind, base, layers) in kinds {
        let f = tower(base, layers);
        let basis = f.two_basis();
        let size = if layers.len() > 2 { 1 } else { 2 };
        let round_trip = (0..1000).all(|_| {
            let x = f.random_element(&mut rng, size);
            let c = f.frobenius_decompose(&x);
            let back = c.iter().zip(&basis).fold(f.zero(), |acc, (cj, bj)| f.add(&acc, &f.mul(&f.square(cj), bj)));
            back == x
        });
        results.push((format!("round trip {kind}"), round_trip));
    }
    for (base, layers, ext) in [
        ("GF(2)", &["rat:t"][..], &["as:t"][..]),
        ("GF(2)", &["rat:t"], &["odd:x^3+x+1"]),
        ("GF(2)", &["rat:s", "rat:t"], &["as:s", "odd:x^5+x^2+1"]),
        ("GF(4)", &["rat:t"], &["odd:x^3+t"]),
    ] {
        let f = tower(base, layers);
        let k = ext.iter().fold(f.clone(), |k, l| k.extend_parsed(l).unwrap());
        let embedded: Vec<FieldElement> = f.two_basis().iter().map(|b| k.embed(&f, b).unwrap()).collect();
        results.push((format!("two-basis over {}", ext.join(", ")), embedded == k.two_basis()));
    }
    let bad = labelled_failures(&results, |ok| *ok);
    Outcome::new(bad.is_empty(), format!("{} checks, failures {:?}", results.len(), bad))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence, Some(Duration::from_secs(120))),
        ("diagonal <1, t> example", example_b, Some(Duration::from_secs(1))),
        ("inseparable jump", inseparable, Some(Duration::from_secs(1))),
        ("separable descent", separable_descent, Some(Duration::from_secs(300))),
        ("decomposability criterion", decomposability, None),
        ("decomposability under separable extension", septd, None),
        ("alternating sums and form laws", form_laws, None),
        ("directness under odd extensions", directness_descent, None),
        ("field-layer exactness", field_exactness, None),
    ];
    let mut all = true;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let passed = outcome.passed && in_time;
        all &= passed;
        let limit_note = limit.map_or(String::new(), |l| format!(" (limit {:.0?})", l));
        println!(
            "criterion {}: {} {name} [{:.2?}{limit_note}] {}",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            outcome.detail
        );
        for finding in &outcome.findings {
            println!("  finding: {finding}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
