//! One line per acceptance criterion. Every criterion runs even when an
//! earlier one fails; the target exits nonzero if any line says FAIL.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use totmonoid::prefix_code::{
    elementary_expansion, enumerate_complete_codes, is_complete, multiset_is_complete,
    partitions_space, ShrubberyMultiset,
};
use totmonoid::presentation::{
    build_r0, distinguishing_pi, mutate, standard_alphabet, verify_relations, R0Options,
};
use totmonoid::rel::{
    arrow_with_domain, canonical_arrow, from_pair, parse_arrow, rel_mul, render_arrow,
};
use totmonoid::tot::{compose, deferment, tot_eq, tot_eq_flat};
use totmonoid::{
    endo_compose, endo_eq, phi, psi, sample, term_eq, Digit, Params, PrefixCode, RelElement,
    RootSystem, Term,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(list: &[(usize, usize, usize)]) -> Vec<Params> {
    list.iter()
        .map(|&(n, k, r)| Params::new(n, k, r).unwrap())
        .collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn arrow_display(x: &RelElement, p: &Params) -> String {
    let (l1, l2) = canonical_arrow(x).unwrap();
    render_arrow(&l1, &l2, p).unwrap()
}

fn bakers_map() -> Outcome {
    let p = Params::new(2, 2, 1).unwrap();
    let element = |src: &str| {
        let (l1, l2) = parse_arrow(src, &p).unwrap();
        from_pair(&l1, &l2, &p).unwrap()
    };
    let f = element("[0 1] -> [0;1]");
    let g = element("[0 1] -> 0");
    let fg = rel_mul(&f, &g).unwrap();
    let got = [
        arrow_display(&f, &p),
        arrow_display(&g, &p),
        arrow_display(&fg, &p),
    ];
    let want = ["[0 1] -> [0;1]", "[0 1] -> 0", "[[0 1] [2 3]] -> [0;2]"];
    check(got == want, format!("{got:?}"))
}

fn variety_identities() -> Outcome {
    let all = params(&[(1, 2, 2), (2, 2, 2), (1, 3, 2), (2, 3, 2)]);
    let two_dims: Vec<Params> = all.iter().copied().filter(|p| p.n() >= 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let instances = 500;
    let mut failures = Vec::new();
    let mut run =
        |name: &str, pool: &[Params], build: &dyn Fn(&Params, &mut ChaCha8Rng) -> (Term, Term)| {
            let mut bad = 0;
            for i in 0..instances {
                let p = pool[i % pool.len()];
                let (lhs, rhs) = build(&p, &mut rng);
                if !term_eq(&lhs, &rhs, &p).unwrap() {
                    bad += 1;
                }
            }
            if bad > 0 {
                failures.push(format!("{name}: {bad} failures"));
            }
        };
    let term = |p: &Params, rng: &mut ChaCha8Rng| sample::term(p, 2, 2, rng);
    let terms =
        |p: &Params, rng: &mut ChaCha8Rng| (0..p.k()).map(|_| term(p, rng)).collect::<Vec<_>>();
    let digit = |p: &Params, rng: &mut ChaCha8Rng| rng.gen_range(0..p.k()) as Digit;
    let dims = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };

    run("eta", &all, &|p, rng| {
        let x = term(p, rng);
        let i = rng.gen_range(0..p.n());
        let lhs = Term::lambda(
            i,
            (0..p.k()).map(|j| x.clone().alpha(i, j as Digit)).collect(),
        );
        (lhs, x)
    });
    run("beta", &all, &|p, rng| {
        let xs = terms(p, rng);
        let i = rng.gen_range(0..p.n());
        let j = digit(p, rng);
        (
            Term::lambda(i, xs.clone()).alpha(i, j),
            xs[j as usize].clone(),
        )
    });
    run("projections commute", &two_dims, &|p, rng| {
        let x = term(p, rng);
        let (l, m) = (digit(p, rng), digit(p, rng));
        (x.clone().alpha(0, l).alpha(1, m), x.alpha(1, m).alpha(0, l))
    });
    run(
        "projection through another dimension",
        &two_dims,
        &|p, rng| {
            let (i, i2) = dims(rng);
            let xs = terms(p, rng);
            let (l, m) = (digit(p, rng), digit(p, rng));
            (
                Term::lambda(i, xs.clone()).alpha(i2, l).alpha(i, m),
                xs[m as usize].clone().alpha(i2, l),
            )
        },
    );
    run("lambda commutes with projections", &two_dims, &|p, rng| {
        let (i, i2) = dims(rng);
        let xs = terms(p, rng);
        let l = digit(p, rng);
        let lhs = Term::lambda(i, xs.iter().map(|x| x.clone().alpha(i2, l)).collect());
        (lhs, Term::lambda(i, xs).alpha(i2, l))
    });
    run("lambdas interchange", &two_dims, &|p, rng| {
        let (i, i2) = dims(rng);
        let k = p.k();
        let x: Vec<Vec<Term>> = (0..k).map(|_| terms(p, rng)).collect();
        let lhs = Term::lambda(i2, (0..k).map(|a| Term::lambda(i, x[a].clone())).collect());
        let rhs = Term::lambda(
            i,
            (0..k)
                .map(|b| Term::lambda(i2, (0..k).map(|a| x[a][b].clone()).collect()))
                .collect(),
        );
        (lhs, rhs)
    });
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("6 identities x {instances} instances")
        } else {
            failures.join("; ")
        },
    )
}

fn map_params() -> Vec<Params> {
    params(&[(1, 2, 1), (2, 2, 1), (1, 3, 2), (2, 3, 1), (1, 2, 2)])
}

fn round_trips() -> Outcome {
    let ps = map_params();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut bad_f, mut bad_e) = (0, 0);
    for i in 0..200 {
        let p = ps[i % ps.len()];
        let f = sample::tot(&p, 2, &mut rng);
        if !tot_eq(&psi(&phi(&f), &p).unwrap(), &f) {
            bad_f += 1;
        }
        let e = sample::endo(&p, 4, 2, &mut rng);
        if !endo_eq(&phi(&psi(&e, &p).unwrap()), &e, &p).unwrap() {
            bad_e += 1;
        }
    }
    check(
        bad_f + bad_e == 0,
        format!("200+200 round trips, failures {bad_f}/{bad_e}"),
    )
}

fn homomorphism() -> Outcome {
    let ps = map_params();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut bad = 0;
    for i in 0..200 {
        let p = ps[i % ps.len()];
        let f = sample::tot(&p, 2, &mut rng);
        let g = sample::tot(&p, 2, &mut rng);
        let lhs = phi(&compose(&f, &g).unwrap());
        let rhs = endo_compose(&phi(&f), &phi(&g), &p).unwrap();
        if !endo_eq(&lhs, &rhs, &p).unwrap() {
            bad += 1;
        }
    }
    check(bad == 0, format!("200 pairs, {bad} failures"))
}

fn expansions() -> Outcome {
    let p = Params::new(1, 2, 1).unwrap();
    let mut problems = Vec::new();
    let mut t = 1usize;
    let mut counts = Vec::new();
    for d in 0..=3 {
        let codes = enumerate_complete_codes(d, &p).unwrap();
        counts.push(codes.len());
        if codes.len() != t {
            problems.push(format!(
                "depth {d}: {} codes, recurrence gives {t}",
                codes.len()
            ));
        }
        t = 1 + t.pow(p.k() as u32);
        for c in &codes {
            if !is_complete(c, &p) || !partitions_space(c.iter(), &p) {
                problems.push(format!("{c} not certified"));
            }
            let m = c.to_multiset();
            for s in c.iter() {
                if !multiset_is_complete(&elementary_expansion(&m, s, 0, &p).unwrap(), &p) {
                    problems.push(format!("expanding {s} in {c} breaks completeness"));
                }
                let rest = PrefixCode::new(&p, c.iter().filter(|x| *x != s).cloned()).unwrap();
                if c.len() > 1 && is_complete(&rest, &p) {
                    problems.push(format!("{rest} accepted"));
                }
                let mut dup: ShrubberyMultiset = c.iter().cloned().collect();
                dup.insert(s.clone());
                if multiset_is_complete(&dup, &p) {
                    problems.push(format!("{c} with {s} repeated accepted"));
                }
            }
        }
    }
    let incomplete = PrefixCode::parse("{(0,(0)); (0,(10))}", &p).unwrap();
    if is_complete(&incomplete, &p) {
        problems.push(format!("{incomplete} accepted"));
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            format!("counts {counts:?}")
        } else {
            problems.join("; ")
        },
    )
}

fn equality_oracles() -> Outcome {
    let ps = map_params();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (mut disagree, mut equal) = (0, 0);
    for i in 0..500 {
        let p = ps[i % ps.len()];
        let f = sample::tot(&p, 2, &mut rng);
        let g = if i < 100 {
            let splits = rng.gen_range(1..=3);
            sample::re_present(&f, splits, &mut rng)
        } else {
            sample::tot(&p, 2, &mut rng)
        };
        let structural = tot_eq(&f, &g);
        if structural != tot_eq_flat(&f, &g).unwrap() || (i < 100 && !structural) {
            disagree += 1;
        }
        equal += usize::from(structural);
    }
    check(
        disagree == 0,
        format!("500 pairs, 100 engineered, {equal} equal, {disagree} disagreements"),
    )
}

fn deferments() -> Outcome {
    let ps = map_params();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (mut depth_bad, mut product_bad) = (0, 0);
    for i in 0..200 {
        let p = ps[i % ps.len()];
        let f = sample::tot(&p, 2, &mut rng);
        let g = sample::tot(&p, 2, &mut rng);
        let w = sample::root_system(&p, 2, &mut rng);
        let fw = deferment(&f, &w).unwrap();
        if fw.depth() > f.depth() + w.depth() {
            depth_bad += 1;
        }
        let lhs = deferment(&compose(&f, &g).unwrap(), &w).unwrap();
        let rhs = compose(&fw, &deferment(&g, &w).unwrap()).unwrap();
        if !tot_eq(&lhs, &rhs) {
            product_bad += 1;
        }
    }
    let p = Params::new(2, 2, 1).unwrap();
    let (l1, l2) = parse_arrow("[0 1] -> [0;1]", &p).unwrap();
    let f = from_pair(&l1, &l2, &p).unwrap();
    let w = RootSystem::parse("[(0,(0,01))]", &p).unwrap();
    let fw = RelElement::from_carrier(&deferment(f.carrier(), &w).unwrap());
    let grid = PrefixCode::parse(
        "{(0,(0,00)); (0,(0,010)); (0,(0,011)); (0,(1,0)); (0,(0,1)); (0,(1,1))}",
        &p,
    )
    .unwrap();
    let (m1, m2) = arrow_with_domain(&fw, &grid).unwrap();
    let shown = render_arrow(&m1, &m2, &p).unwrap();
    let example_ok = shown == "[[0;[1 2]] 3;4 5] -> [[0;[1;2]] 3;4 5]";
    check(
        depth_bad + product_bad == 0 && example_ok,
        format!("200 triples, failures {depth_bad}/{product_bad}; example {shown}"),
    )
}

fn soundness() -> Outcome {
    let mut problems = Vec::new();
    let mut sizes = Vec::new();
    for p in params(&[(1, 2, 1), (2, 2, 1), (1, 2, 2)]) {
        let a = standard_alphabet(&p).unwrap();
        let rels = build_r0(&a, &R0Options::default()).unwrap().relations;
        let report = verify_relations(&rels, &a).unwrap();
        sizes.push(rels.len());
        for c in report.failures() {
            problems.push(format!("{p}: {}", c.relation));
        }
    }
    let p = Params::new(1, 2, 1).unwrap();
    let a = standard_alphabet(&p).unwrap();
    let rels = build_r0(&a, &R0Options::default()).unwrap().relations;
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mutated: Vec<_> = rels
        .choose_multiple(&mut rng, 20)
        .map(|r| mutate(r, &a, &mut rng))
        .collect();
    let report = verify_relations(&mutated, &a).unwrap();
    let detected = report.failures().count();
    let survivors: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.passed())
        .map(|c| c.relation.to_string())
        .collect();
    if detected < 18 {
        problems.push(format!("only {detected}/20 mutations detected"));
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{sizes:?} relations sound; {detected}/20 mutations detected, undetected {survivors:?}")
        } else {
            problems.join("; ")
        },
    )
}

fn separation() -> Outcome {
    let p = Params::new(1, 2, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut pairs, mut bad) = (0, 0);
    while pairs < 50 {
        let g = sample::rel(&p, 2, &mut rng);
        let h = sample::rel(&p, 2, &mut rng);
        if g == h || g.depth() > 2 || h.depth() > 2 {
            continue;
        }
        pairs += 1;
        if distinguishing_pi(&g, &h, 2).unwrap().is_none() {
            bad += 1;
        }
        let same = RelElement::from_carrier(&sample::re_present(g.carrier(), 2, &mut rng));
        if distinguishing_pi(&g, &same, 2).unwrap().is_some() {
            bad += 1;
        }
    }
    check(bad == 0, format!("{pairs} pairs, {bad} failures"))
}

fn corpus() -> Outcome {
    let (total, bad) = common::mismatches();
    check(
        total >= 25 && bad.is_empty(),
        format!("{total} cases, mismatched {bad:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("baker's map displays", bakers_map),
        ("variety identities", variety_identities),
        ("isomorphism round trips", round_trips),
        ("homomorphism law", homomorphism),
        ("complete codes and expansions", expansions),
        ("equality oracles agree", equality_oracles),
        ("deferment laws", deferments),
        ("relation soundness", soundness),
        ("separation by P_d", separation),
        ("CLI corpus", corpus),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
