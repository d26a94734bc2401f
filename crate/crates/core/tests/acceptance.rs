//! The ten acceptance criteria, each at its stated size and time limit.
//! Prints one line per criterion and exits nonzero if any fails.

use std::collections::HashSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::Rng;

use permcanon::canon::{canon_oracle, canonize, fixtures, validate};
use permcanon::gen::{self, random_element, random_generator_set, random_morphism_instance, random_permutation};
use permcanon::group::{closure_bruteforce, membership_by_order};
use permcanon::morphism::{image_chain, kernel_contains, kernel_order};
use permcanon::rank::{gauss_rank, image_bruteforce, image_group_generators, rank_p, solvable_mod_m, MatrixModP, VecModM};
use permcanon::selftest::{check_structural, transpositions};
use permcanon::{GeneratorSet, Permutation, StabilizerChain};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($t:tt)*) => {
        if !$cond {
            return Err(format!($($t)*));
        }
    };
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:.2?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn factorial_law() -> Outcome {
    let start = Instant::now();
    for n in 3..=7usize {
        let expected: BigUint = (1..=n).map(BigUint::from).product();
        ensure!(transpositions(n).order() == expected, "n = {n}");
    }
    within(Duration::from_secs(1), start)?;
    Ok("n = 3..7".into())
}

type GroupCase = (GeneratorSet, Vec<Permutation>);

fn group_cases() -> Vec<GroupCase> {
    let mut rng = gen::rng(2);
    (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=7);
            let s = random_generator_set(&mut rng, n, 3);
            let mut probes: Vec<Permutation> = (0..5).map(|_| random_permutation(&mut rng, n)).collect();
            probes.extend((0..5).map(|_| random_element(&mut rng, &s)));
            (s, probes)
        })
        .collect()
}

fn closure_equivalence(cases: &[GroupCase]) -> Outcome {
    let start = Instant::now();
    let mut probes = 0;
    for (k, (s, ps)) in cases.iter().enumerate() {
        let closure = closure_bruteforce(s, 5040).map_err(e)?;
        let chain = StabilizerChain::build(s);
        ensure!(chain.order() == BigUint::from(closure.len()), "case {k}: order");
        for p in ps {
            ensure!(chain.contains(p).map_err(e)? == closure.contains(p), "case {k}: contains({p})");
            probes += 1;
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{} sets, {probes} probes", cases.len()))
}

fn membership_law(cases: &[GroupCase]) -> Outcome {
    for (k, (s, ps)) in cases.iter().enumerate() {
        let chain = StabilizerChain::build(s);
        for p in ps {
            ensure!(membership_by_order(s, p).map_err(e)? == chain.contains(p).map_err(e)?, "case {k}: {p}");
        }
    }
    Ok(format!("{} sets", cases.len()))
}

fn first_isomorphism() -> Outcome {
    let mut rng = gen::rng(4);
    for k in 0..100 {
        let (s, m) = random_morphism_instance(&mut rng).map_err(e)?;
        let closure = closure_bruteforce(&s, 5040).map_err(e)?;
        let kernel: HashSet<&Permutation> = closure
            .iter()
            .filter(|x| m.evaluate(x).is_ok_and(|v| v.is_identity()))
            .collect();
        let ker = kernel_order(&m, &s).map_err(e)?;
        let im = image_chain(&m, &s).map_err(e)?.order();
        ensure!(&ker * &im == BigUint::from(closure.len()), "case {k}: |ker| |im| = {}, |G| = {}", &ker * &im, closure.len());
        ensure!(ker == BigUint::from(kernel.len()), "case {k}: kernel order");
        for x in &closure {
            ensure!(kernel_contains(&m, &s, x).map_err(e)? == kernel.contains(x), "case {k}: kernel_contains({x})");
        }
    }
    Ok("100 instances".into())
}

fn random_matrix(rng: &mut impl Rng, q: u64, max_rows: usize, max_cols: usize) -> MatrixModP {
    let r = rng.gen_range(1..=max_rows);
    let c = rng.gen_range(1..=max_cols);
    MatrixModP::new(q, (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..q)).collect()).collect()).unwrap()
}

fn rank_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = gen::rng(5);
    for k in 0..500 {
        let p = [2u64, 3, 5, 7][k % 4];
        let m = random_matrix(&mut rng, p, 8, 8);
        let r = rank_p(&m).map_err(e)?;
        ensure!(r == gauss_rank(&m).map_err(e)?, "case {k}: rank");
        ensure!(image_group_generators(&m).order() == BigUint::from(p).pow(r as u32), "case {k}: image order");
    }
    within(Duration::from_secs(60), start)?;
    Ok("500 matrices".into())
}

fn target(rng: &mut impl Rng, m: &MatrixModP) -> Vec<u64> {
    let q = m.modulus();
    let mut y = vec![0; m.cols()];
    if rng.gen_bool(0.5) {
        for row in m.entries() {
            let x = rng.gen_range(0..q);
            for (yj, r) in y.iter_mut().zip(row) {
                *yj = (*yj + x * r) % q;
            }
        }
    } else {
        y.iter_mut().for_each(|yj| *yj = rng.gen_range(0..q));
    }
    y
}

fn res_consistency() -> Outcome {
    let mut rng = gen::rng(6);
    let mut solvable = 0;
    for k in 0..200 {
        let p = [2u64, 3, 5, 7][k % 4];
        let m = random_matrix(&mut rng, p, 6, 6);
        let y = target(&mut rng, &m);
        let mut aug = m.entries().to_vec();
        aug.push(y.clone());
        let aug = MatrixModP::with_cols(p, m.cols(), aug).unwrap();
        let expected = gauss_rank(&aug).map_err(e)? == gauss_rank(&m).map_err(e)?;
        let got = solvable_mod_m(&m, &VecModM::new(p, y).unwrap()).map_err(e)?;
        ensure!(got == expected, "prime case {k}");
        solvable += usize::from(got);
    }
    let mut composite = 0;
    while composite < 50 {
        let q = [4u64, 6, 8, 9, 10, 12][composite % 6];
        let m = random_matrix(&mut rng, q, 4, 4);
        let Ok(image) = image_bruteforce(&m, 10_000) else {
            continue;
        };
        let y = target(&mut rng, &m);
        let got = solvable_mod_m(&m, &VecModM::new(q, y.clone()).unwrap()).map_err(e)?;
        ensure!(got == image.contains(&y), "composite case {composite}");
        composite += 1;
    }
    Ok(format!("200 prime ({solvable} solvable), 50 composite"))
}

fn canon_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = gen::rng(7);
    let mut edges = 0;
    for k in 0..100 {
        let g = gen::random_instance(&mut rng, 5, 6, 10_000).and_then(|f| f.to_graph()).map_err(e)?;
        let fast = canonize(&g).map_err(e)?;
        ensure!(fast == canon_oracle(&g, 10_000).map_err(e)?, "case {k}");
        edges += fast.edges.len();
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("100 instances, {edges} edges"))
}

fn isomorphism_invariance() -> Outcome {
    let mut rng = gen::rng(8);
    let mut files = Vec::new();
    for base in ["triangle", "k4", "k33", "prism", "cube"] {
        let (v, edges) = gen::named_base(base).map_err(e)?;
        let plain = gen::cfi(v, &edges, false, 0, 11).map_err(e)?;
        let twisted = gen::cfi(v, &edges, true, v / 2, 12).map_err(e)?;
        let a = canonize(&plain.to_graph().map_err(e)?).map_err(e)?;
        let b = canonize(&twisted.to_graph().map_err(e)?).map_err(e)?;
        ensure!(a != b, "{base}: twisted and untwisted forms coincide");
        files.push(plain);
        files.push(twisted);
    }
    while files.len() < 100 {
        files.push(gen::random_instance(&mut rng, 6, 7, 100_000).map_err(e)?);
    }
    for (k, f) in files.iter().enumerate() {
        let raw = f.to_raw();
        let bytes = canonize(&validate(&raw).map_err(e)?).map_err(e)?.to_json();
        for r in 0..10 {
            let other = gen::relabel(&raw, &mut rng);
            let b = canonize(&validate(&other).map_err(e)?).map_err(e)?.to_json();
            ensure!(b == bytes, "instance {k}, relabeling {r}");
        }
    }
    Ok("100 instances x 10 relabelings, 5 cfi pairs distinguished".into())
}

fn structural_lemmas() -> Outcome {
    let start = Instant::now();
    let mut rng = gen::rng(9);
    check_structural(&fixtures::b(), 100_000, &mut rng).map_err(|m| format!("fixture B: {m}"))?;
    check_structural(&fixtures::c4(), 100_000, &mut rng).map_err(|m| format!("fixture C4: {m}"))?;
    for k in 0..20 {
        let g = gen::random_instance(&mut rng, 3, 4, 64).and_then(|f| f.to_graph()).map_err(e)?;
        check_structural(&g, 100_000, &mut rng).map_err(|m| format!("instance {k}: {m}"))?;
    }
    within(Duration::from_secs(120), start)?;
    Ok("fixtures B, C4 and 20 instances".into())
}

fn scale_sanity() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let cases = [
        gen::cyclic(&[8, 8, 8, 8, 7, 7, 7, 7], 0.3, gen::IntraEdges::None, 1),
        gen::abelian(&[8, 8, 8, 8, 8, 8, 6, 6], 0.3, gen::IntraEdges::Random, 2),
        gen::cyclic(&[8; 7], 0.5, gen::IntraEdges::Cycle, 3),
    ];
    let mut slowest = Duration::ZERO;
    for (k, f) in cases.into_iter().enumerate() {
        let f = f.map_err(e)?;
        assert!(f.n <= 60 && f.classes.len() <= 8);
        let path = dir.path().join(format!("scale{k}.json"));
        std::fs::write(&path, permcanon::io::to_json(&f)).map_err(e)?;
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_permcanon"))
            .arg("canon")
            .arg(&path)
            .output()
            .map_err(e)?;
        let t = start.elapsed();
        ensure!(out.status.success(), "case {k}: exit {:?}", out.status.code());
        within(Duration::from_secs(60), start).map_err(|m| format!("case {k}: {m}"))?;
        slowest = slowest.max(t);
    }
    Ok(format!("3 instances, slowest {slowest:.2?}"))
}

fn main() -> ExitCode {
    let cases = group_cases();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("factorial law", Box::new(factorial_law)),
        ("closure-oracle equivalence", Box::new(|| closure_equivalence(&cases))),
        ("membership by order", Box::new(|| membership_law(&cases))),
        ("first isomorphism law", Box::new(first_isomorphism)),
        ("rank oracle", Box::new(rank_oracle)),
        ("solvability consistency", Box::new(res_consistency)),
        ("canonization oracle", Box::new(canon_oracle_equivalence)),
        ("isomorphism invariance", Box::new(isomorphism_invariance)),
        ("structural lemmas", Box::new(structural_lemmas)),
        ("scale sanity", Box::new(scale_sanity)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS {name}: {detail} [{t:.2?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL {name}: {why} [{t:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
