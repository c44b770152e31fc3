//! Acceptance run: one line per criterion; a failing criterion fails the run.
//!
//! Criterion 5 needs annotation files; set `IDEAL_RPM_IRAVEN_DIR` to a
//! directory of Center-configuration XML files to enable it.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use ideal_rpm::domain::{encode_panel, split_views, ConceptMatrix, PanelEntity, ViewTag};
use ideal_rpm::generation::{generate_answer, invert, similarity};
use ideal_rpm::groebner::{buchberger, ideal_intersect_elim, ideal_member, GrevlexOrder, Polynomial, TermOrder};
use ideal_rpm::invariance::{
    p12, p_binary, p_comp, p_inter, p_intra, select_answer, weighted_accuracy, BinOp, ExtractionConfig, Module, Pattern,
    RowDecomposition, TaggedPattern,
};
use ideal_rpm::io::raven::{load_raven_xml, RavenMapping};
use ideal_rpm::io::synthetic::{family_instance, Layout, RuleFamily};
use ideal_rpm::{
    minimalize, primary_decompose, primary_decompose_by_splitting, AttrKind, Concept, Monomial, PivotRule, Schema,
    VariableId,
};
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

// ---------------------------------------------------------------- worked example

fn running() -> (Schema, ConceptMatrix) {
    let s = Schema::running_example();
    let cells = [
        [["left", "square", "black", "avg"], ["right", "triangle", "gray", "avg"]],
        [["left", "pentagon", "gray", "avg"], ["right", "square", "gray", "avg"]],
        [["left", "circle", "white", "avg"], ["right", "pentagon", "gray", "avg"]],
        [["left", "pentagon", "white", "small"], ["right", "pentagon", "dgray", "small"]],
        [["left", "circle", "black", "small"], ["right", "hexagon", "dgray", "small"]],
        [["left", "square", "gray", "small"], ["right", "circle", "dgray", "small"]],
        [["left", "circle", "gray", "avg"], ["right", "pentagon", "gray", "large"]],
        [["left", "square", "white", "avg"], ["right", "hexagon", "gray", "large"]],
    ];
    let m = ConceptMatrix::new(cells.iter().map(|c| panel(&s, c)).collect());
    (s, m)
}

fn panel(s: &Schema, ents: &[[&str; 4]]) -> Concept {
    let es: Vec<PanelEntity> = ents.iter().map(|[p, t, c, z]| PanelEntity::from_labels(s, p, t, c, z).unwrap()).collect();
    encode_panel(&es, s).unwrap()
}

fn simple(s: &Schema, labels: &[&str]) -> Concept {
    Concept::simple(labels.iter().map(|l| s.var(l).unwrap()))
}

fn simples(s: &Schema, sets: &[&[&str]]) -> BTreeSet<Concept> {
    sets.iter().map(|l| simple(s, l)).collect()
}

fn worked_example() -> Outcome {
    let (s, m) = running();
    let row1 = m.row(0);
    let rd = RowDecomposition::new(row1);
    let pd_sum: BTreeSet<Concept> = rd.sum.iter().cloned().collect();
    let pd_cap: BTreeSet<Concept> = rd.intersection.iter().cloned().collect();
    let want_sum = simples(
        &s,
        &[
            &["two"],
            &["avg"],
            &["left", "right"],
            &["white", "gray", "black"],
            &["triangle", "square", "pentagon", "circle"],
            &["left", "gray"],
            &["square", "circle", "gray"],
            &["square", "white", "gray"],
            &["circle", "gray", "black"],
            &["left", "triangle", "square", "pentagon"],
            &["right", "square", "pentagon", "circle"],
            &["right", "square", "pentagon", "white"],
            &["right", "pentagon", "circle", "black"],
            &["right", "pentagon", "white", "black"],
            &["triangle", "square", "pentagon", "white"],
        ],
    );
    let want_cap = simples(
        &s,
        &[
            &["two"],
            &["avg"],
            &["left", "right"],
            &["gray"],
            &["triangle", "square"],
            &["square", "pentagon"],
            &["pentagon", "circle"],
            &["left", "triangle"],
            &["left", "square"],
            &["left", "pentagon"],
            &["right", "square"],
            &["right", "pentagon"],
            &["right", "circle"],
            &["right", "white"],
            &["right", "black"],
            &["triangle", "black"],
            &["pentagon", "white"],
        ],
    );
    check(pd_sum == want_sum, || format!("pd(J+) has {} components, differs from the 15 listed", pd_sum.len()))?;
    check(pd_cap == want_cap, || format!("pd(J∩) has {} components, differs from the 17 listed", pd_cap.len()))?;

    let intra_attrs: BTreeSet<AttrKind> = p_intra(row1, &s).unwrap().iter().map(Pattern::attr).collect();
    check(intra_attrs == BTreeSet::from([AttrKind::Num, AttrKind::Pos, AttrKind::Size]), || {
        format!("intra attributes of row 1: {intra_attrs:?}")
    })?;

    let comps = |sets: &[&[&str]]| simples(&s, sets).into_iter().collect::<Vec<_>>();
    let inter2 = p_inter(m.row(1), &s).unwrap();
    let want_inter2 = BTreeSet::from([
        Pattern::Inter { attr: AttrKind::Color, components: comps(&[&["white", "dgray"], &["gray", "dgray"], &["black", "dgray"]]) },
        Pattern::Inter { attr: AttrKind::Type, components: comps(&[&["pentagon"], &["square", "circle"], &["hexagon", "circle"]]) },
    ]);
    check(inter2 == want_inter2, || format!("inter of row 2: {inter2:?}"))?;

    let right = s.var("right").unwrap();
    let left = s.var("left").unwrap();
    let views = split_views(&m, &s);
    let right_view = views.iter().find(|v| v.view == ViewTag::Bar(right)).unwrap();
    let comp = p_comp(right_view.row(0), &s, &[1]).unwrap();
    check(comp == BTreeSet::from([Pattern::Comp { attr: AttrKind::Type, delta: 1 }]), || format!("comp: {comp:?}"))?;

    let ops = [BinOp::Add, BinOp::Sub];
    for r in 0..2 {
        let b = p_binary(m.row(r), &s, &[AttrKind::Num], &ops).unwrap();
        check(b.is_empty(), || format!("binary on row {}: {b:?}", r + 1))?;
    }

    let config = ExtractionConfig::default();
    let shared = p12(&m, &s, &config).unwrap();
    let tag = |pattern: Pattern, view: ViewTag| TaggedPattern { pattern, view };
    let intra = |attr, arity| Pattern::Intra { attr, arity };
    let p11 = tag(intra(AttrKind::Size, 1), ViewTag::Full);
    let want: BTreeSet<TaggedPattern> = [
        tag(intra(AttrKind::Num, 1), ViewTag::Full),
        tag(intra(AttrKind::Pos, 2), ViewTag::Full),
        tag(intra(AttrKind::Num, 1), ViewTag::Bar(left)),
        tag(intra(AttrKind::Pos, 1), ViewTag::Bar(left)),
        tag(intra(AttrKind::Num, 1), ViewTag::Bar(right)),
        tag(intra(AttrKind::Pos, 1), ViewTag::Bar(right)),
        tag(Pattern::Inter { attr: AttrKind::Type, components: comps(&[&["square"], &["pentagon"], &["circle"]]) }, ViewTag::Bar(left)),
        tag(Pattern::Comp { attr: AttrKind::Type, delta: 1 }, ViewTag::Bar(right)),
        tag(intra(AttrKind::Color, 1), ViewTag::Bar(right)),
        tag(Pattern::Inter { attr: AttrKind::Color, components: comps(&[&["white"], &["gray"], &["black"]]) }, ViewTag::Bar(left)),
        p11.clone(),
        tag(intra(AttrKind::Size, 1), ViewTag::Bar(left)),
        tag(intra(AttrKind::Size, 1), ViewTag::Bar(right)),
    ]
    .into_iter()
    .collect();
    check(shared == want, || {
        let got: Vec<String> = shared.iter().map(|p| p.display(&s)).collect();
        format!("{} shared patterns: {got:?}", shared.len())
    })?;

    let conflicts: Vec<&TaggedPattern> = shared
        .iter()
        .filter(|tp| {
            let view = views.iter().find(|v| v.view == tp.view).unwrap();
            invert(&tp.pattern, view.row(2), &s).is_zero()
        })
        .collect();
    check(conflicts == vec![&p11], || format!("conflicting patterns: {conflicts:?}"))?;

    let expected = panel(&s, &[["left", "pentagon", "black", "avg"], ["right", "circle", "gray", "large"]]);
    for seed in 0..16 {
        let g = generate_answer(&m, &s, &config, seed).unwrap();
        check(g.concept == expected && g.random_choices.is_empty(), || format!("seed {seed}: {}", s.show(&g.concept)))?;
    }
    Ok("15/17 components, intra/inter/comp/binary examples, 13 shared patterns, one conflict, generated answer".into())
}

// ---------------------------------------------------------------- algebra kernel

fn random_concept(rng: &mut ChaCha8Rng, n: u32, squarefree: bool) -> Concept {
    let k = rng.random_range(1..=5);
    minimalize((0..k).map(|_| {
        let len = rng.random_range(1..=3);
        let max_e = if squarefree { 1 } else { 3 };
        let m = Monomial::from_pairs((0..len).map(|_| (VariableId(rng.random_range(0..n)), rng.random_range(1..=max_e))));
        if squarefree {
            m.squarefree_part()
        } else {
            m
        }
    }))
}

fn subset_monomial(mask: u32, n: u32) -> Monomial {
    Monomial::from_vars((0..n).filter(|i| mask >> i & 1 == 1).map(VariableId))
}

fn in_product(a: &Concept, b: &Concept, mask: u32, n: u32) -> bool {
    // m ∈ AB iff the support splits as S ⊔ T with x^S ∈ A and x^T ∈ B
    let mut s = mask;
    loop {
        if a.member(&subset_monomial(s, n)) && b.member(&subset_monomial(mask & !s, n)) {
            return true;
        }
        if s == 0 {
            return false;
        }
        s = (s - 1) & mask;
    }
}

fn algebra_kernel() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = 1000;
    for case in 0..cases {
        let n = rng.random_range(2..=10u32);
        let squarefree = case % 2 == 0;
        let j = random_concept(&mut rng, n, squarefree);
        let pd = primary_decompose(&j).map_err(|e| format!("case {case}: {e}"))?;
        check(pd.reconstruct() == j, || format!("case {case}: ⋂ pd(J) != J for {j}"))?;
        if squarefree {
            check(pd.components().iter().all(Concept::is_simple), || format!("case {case}: non-simple component of {j}"))?;
        }
        for rule in [PivotRule::GrevlexLargest, PivotRule::GrevlexSmallest, PivotRule::Seeded(case as u64)] {
            let other = primary_decompose_by_splitting(&j, rule).unwrap();
            check(other.components() == pd.components(), || format!("case {case}: pivot {rule:?} changes pd({j})"))?;
        }

        let a = random_concept(&mut rng, n, true);
        let b = random_concept(&mut rng, n, true);
        let (sum, prod, cap) = (a.sum(&b), a.product(&b), a.intersect(&b));
        check(cap.contains(&prod), || format!("case {case}: product not inside intersection"))?;
        for mask in 0u32..(1 << n) {
            let m = subset_monomial(mask, n);
            let (ia, ib) = (a.member(&m), b.member(&m));
            check(sum.member(&m) == (ia || ib), || format!("case {case}: sum membership of {m}"))?;
            check(cap.member(&m) == (ia && ib), || format!("case {case}: intersection membership of {m}"))?;
            check(prod.member(&m) == in_product(&a, &b, mask, n), || format!("case {case}: product membership of {m}"))?;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("{cases} cases in {t:.2?}"))
}

// ---------------------------------------------------------------- Gröbner

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn random_poly(rng: &mut ChaCha8Rng, ord: &TermOrder) -> Polynomial<BigRational> {
    let terms = rng.random_range(1..=3);
    Polynomial::from_terms(
        (0..terms).map(|_| {
            let deg = rng.random_range(0..=3);
            let m = Monomial::from_pairs((0..deg).map(|_| (VariableId(rng.random_range(0..4)), 1)));
            let c = loop {
                let c = rng.random_range(-3..=3i64);
                if c != 0 {
                    break c;
                }
            };
            (q(c), m)
        }),
        ord,
    )
}

fn monomials_as_polys(c: &Concept, ord: &TermOrder) -> Vec<Polynomial<BigRational>> {
    c.mingen().iter().map(|m| Polynomial::from_terms([(q(1), m.clone())], ord)).collect()
}

fn groebner_suite() -> Outcome {
    let start = Instant::now();
    let ord = TermOrder::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 200 {
        let k = rng.random_range(1..=3);
        let gens: Vec<_> = (0..k).map(|_| random_poly(&mut rng, &ord)).filter(|p| !p.is_zero()).collect();
        if gens.is_empty() {
            continue;
        }
        let gb = buchberger(&gens, &ord).map_err(|e| format!("ideal {done}: {e}"))?;
        check(gb.satisfies_criterion(), || format!("ideal {done}: S-pairs do not reduce to zero"))?;
        check(gens.iter().all(|g| ideal_member(g, &gb)), || format!("ideal {done}: generator not a member"))?;
        done += 1;
    }
    let t_gb = start.elapsed();
    check(t_gb < Duration::from_secs(60), || format!("Buchberger batch took {t_gb:?}"))?;

    let grevlex = GrevlexOrder::new();
    for pair in 0..500 {
        let a = random_concept(&mut rng, 4, pair % 3 != 0);
        let b = random_concept(&mut rng, 4, pair % 3 != 0);
        let gb = ideal_intersect_elim(&monomials_as_polys(&a, &ord), &monomials_as_polys(&b, &ord), &grevlex)
            .map_err(|e| format!("pair {pair}: {e}"))?;
        let elim = minimalize(gb.as_monomials().ok_or_else(|| format!("pair {pair}: non-monomial basis"))?);
        check(elim == a.intersect(&b), || format!("pair {pair}: elimination {elim} vs lcm {}", a.intersect(&b)))?;
    }

    let mut cubics: Vec<Monomial> = (0..=3u32)
        .flat_map(|a| (0..=3 - a).map(move |b| Monomial::from_exponents(&[a, b, 3 - a - b])))
        .collect();
    cubics.sort_by(|x, y| y.cmp(x));
    let name = |v: VariableId| format!("x_{}", v.0 + 1);
    let listing: Vec<String> = cubics.iter().map(|m| m.display_with(&name).to_string()).collect();
    let want = "x_1^3 > x_1^2*x_2 > x_1*x_2^2 > x_2^3 > x_1^2*x_3 > x_1*x_2*x_3 > x_2^2*x_3 > x_1*x_3^2 > x_2*x_3^2 > x_3^3";
    check(listing.join(" > ") == want, || format!("grevlex listing {}", listing.join(" > ")))?;
    Ok(format!("200 bases in {t_gb:.2?}, 500 intersections, cubic listing"))
}

// ---------------------------------------------------------------- synthetic

struct Batch {
    accuracy: Rational64,
    phi_mean: Option<Rational64>,
    determined: usize,
}

fn run_batch(family: RuleFamily, n: u64, schema: &Schema, config: &ExtractionConfig, with_generation: bool) -> Result<Batch, String> {
    let mut reports = Vec::with_capacity(n as usize);
    let mut phi_sum = Rational64::from_integer(0);
    let mut determined = 0;
    for seed in 0..n {
        let layout = Layout::ALL[(seed % 3) as usize];
        let si = family_instance(family, layout, schema, seed).map_err(|e| e.to_string())?;
        let inst = &si.instance;
        let r = select_answer(inst, schema, config).map_err(|e| format!("{}: {e}", inst.id))?;
        let truth = inst.ground_truth.unwrap();
        if with_generation && si.pattern_determined {
            let g = generate_answer(&inst.question_matrix(), schema, config, seed).map_err(|e| format!("{}: {e}", inst.id))?;
            let phi = similarity(&g.concept, &inst.answers[truth], schema).map_err(|e| e.to_string())?.phi;
            phi_sum += phi;
            determined += 1;
        }
        reports.push((r, truth));
    }
    let accuracy = weighted_accuracy(reports.iter().map(|(r, t)| (r, *t))).unwrap();
    let phi_mean = (determined > 0).then(|| phi_sum / Rational64::from_integer(determined as i64));
    Ok(Batch { accuracy, phi_mean, determined })
}

fn as_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn synthetic_accuracy() -> Outcome {
    let start = Instant::now();
    let schema = Schema::iraven_full();
    let config = ExtractionConfig::default();
    let mut lines = Vec::new();
    for family in RuleFamily::ALL {
        let b = run_batch(family, 500, &schema, &config, true)?;
        check(b.accuracy >= Rational64::new(99, 100), || format!("{family}: accuracy {:.4}", as_f64(b.accuracy)))?;
        if let Some(phi) = b.phi_mean {
            check(phi == Rational64::from_integer(1), || format!("{family}: mean phi {:.4} over {}", as_f64(phi), b.determined))?;
        }
        lines.push(format!("{family} {:.4} (phi over {})", as_f64(b.accuracy), b.determined));
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{} in {t:.1?}", lines.join(", ")))
}

fn ablation() -> Outcome {
    let schema = Schema::iraven_full();
    let full = ExtractionConfig::default();
    let mut lines = Vec::new();
    for (family, module) in [
        (RuleFamily::Constant, Module::Intra),
        (RuleFamily::SetPermutation, Module::Inter),
        (RuleFamily::Progression, Module::Comp),
        (RuleFamily::Arithmetic, Module::Binary),
    ] {
        let with = run_batch(family, 150, &schema, &full, false)?.accuracy;
        let without = run_batch(family, 150, &schema, &full.clone().without(module), false)?.accuracy;
        check(without < with, || format!("{family} without {module}: {:.3} vs {:.3}", as_f64(without), as_f64(with)))?;
        lines.push(format!("{family} -{module}: {:.3} -> {:.3}", as_f64(with), as_f64(without)));
    }
    Ok(lines.join(", "))
}

fn dataset_gated() -> Option<Outcome> {
    let dir = std::env::var_os("IDEAL_RPM_IRAVEN_DIR")?;
    let run = || -> Outcome {
        let schema = Schema::iraven_full();
        let mapping = RavenMapping::default();
        let config = ExtractionConfig::default();
        let mut files: Vec<_> = std::fs::read_dir(Path::new(&dir))
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "xml"))
            .collect();
        files.sort();
        let mut reports = Vec::new();
        for f in &files {
            let inst = load_raven_xml(f, &schema, &mapping).map_err(|e| e.to_string())?;
            let Some(truth) = inst.ground_truth else { continue };
            reports.push((select_answer(&inst, &schema, &config).map_err(|e| e.to_string())?, truth));
        }
        let acc = weighted_accuracy(reports.iter().map(|(r, t)| (r, *t))).ok_or("no annotated instances")?;
        check(acc >= Rational64::new(98, 100), || format!("accuracy {:.4} on {}", as_f64(acc), reports.len()))?;
        Ok(format!("{:.4} on {} instances", as_f64(acc), reports.len()))
    };
    Some(run())
}

fn main() -> std::process::ExitCode {
    let mut failures = Vec::new();
    let mut report = |n: usize, name: &str, outcome: Option<Outcome>| match outcome {
        Some(Ok(detail)) => println!("criterion {n} PASS  {name}: {detail}"),
        Some(Err(why)) => {
            println!("criterion {n} FAIL  {name}: {why}");
            failures.push(n);
        }
        None => println!("criterion {n} SKIP  {name}: IDEAL_RPM_IRAVEN_DIR not set"),
    };
    let t = Instant::now();
    let worked = worked_example();
    let elapsed = t.elapsed();
    let worked = worked.and_then(|d| {
        check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
        Ok(format!("{d} in {elapsed:.2?}"))
    });
    report(1, "worked example", Some(worked));
    report(2, "algebra kernel properties", Some(algebra_kernel()));
    report(3, "Gröbner suite", Some(groebner_suite()));
    report(4, "synthetic accuracy and generation", Some(synthetic_accuracy()));
    report(5, "annotated dataset", dataset_gated());
    report(6, "ablation direction", Some(ablation()));
    if failures.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failures:?}");
        std::process::ExitCode::FAILURE
    }
}
