//! Invariant suites over generated corpora, each checked against a
//! brute-force oracle. Every suite draws its cases from `gen::rng(seed)`,
//! so a report is reproducible from its seed list.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::canon::{
    canon_oracle, canonize, canonize_with, encode_relative, fixtures, group_g_generators, local_labeling,
    m_init_eval, oplus, phi_of_anchors, refine_intra, theta_eval, v_ij, v_init, witness, AbelianColoredGraph,
    CanonState, CanonicalForm, Convention, PartialLabeling,
};
use crate::error::{Error, Result};
use crate::gen::{self, random_element, random_generator_set, random_morphism_instance, random_permutation};
use crate::group::{closure_bruteforce, membership_by_order, GeneratorSet, StabilizerChain};
use crate::io::{self, ColoredGraphFile, GroupFile, MatrixFile};
use crate::morphism::{
    coset_is_empty, coset_size, image_chain, kernel_contains, kernel_order, tensor, MorphismCoset, PermMorphism,
};
use crate::perm::Permutation;
use crate::rank::{gauss_rank, image_bruteforce, image_group_generators, rank_p, solvable_mod_m, MatrixModP, VecModM};

#[derive(Clone, Debug)]
pub struct Options {
    pub seeds: Vec<u64>,
    /// Upper bound on `∏|A_i|` for the canonization oracle.
    pub cap: usize,
    /// Debug hook: canonize under the reversed comparison while the oracle
    /// keeps the default one. The oracle suite must then fail.
    pub corrupt_convention: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seeds: (1..=20).collect(),
            cap: 10_000,
            corrupt_convention: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, label: impl fmt::Display, check: Check) {
        self.cases += 1;
        if let Err(e) = check {
            self.failures.push(format!("{label}: {e}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let verdict = if s.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {} ({} cases)", s.name, s.cases)?;
            for e in s.failures.iter().take(5) {
                writeln!(f, "    {e}")?;
            }
            if s.failures.len() > 5 {
                writeln!(f, "    ... {} more", s.failures.len() - 5)?;
            }
        }
        Ok(())
    }
}

pub type Check = std::result::Result<(), String>;

fn msg(e: Error) -> String {
    e.to_string()
}

macro_rules! ensure {
    ($cond:expr, $($t:tt)*) => {
        if !$cond {
            return Err(format!($($t)*));
        }
    };
}

/// Suite names in run order.
pub const SUITES: [&str; 10] = [
    "factorial",
    "closure-oracle",
    "membership-law",
    "morphism-laws",
    "rank-oracle",
    "res-consistency",
    "canon-oracle",
    "canon-invariance",
    "structural-lemmas",
    "io",
];

pub fn run(opts: &Options) -> Report {
    let suites = std::thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .map(|&name| scope.spawn(move || run_suite(name, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suites do not panic"))
            .collect()
    });
    Report { suites }
}

pub fn run_suite(name: &'static str, opts: &Options) -> SuiteReport {
    let mut rep = SuiteReport::new(name);
    match name {
        "factorial" => factorial(&mut rep),
        "closure-oracle" => closure_oracle(&mut rep, opts),
        "membership-law" => membership_law(&mut rep, opts),
        "morphism-laws" => morphism_laws(&mut rep, opts),
        "rank-oracle" => rank_oracle(&mut rep, opts),
        "res-consistency" => res_consistency(&mut rep, opts),
        "canon-oracle" => canon_oracle_suite(&mut rep, opts),
        "canon-invariance" => canon_invariance(&mut rep, opts),
        "structural-lemmas" => structural(&mut rep, opts),
        "io" => io_suite(&mut rep, opts),
        _ => rep.record("dispatch", Err(format!("unknown suite {name}"))),
    }
    rep
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    gen::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

pub fn transpositions(n: usize) -> GeneratorSet {
    let gens = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| Permutation::from_cycles(n, &[&[a, b]]).expect("valid transposition"))
        .collect();
    GeneratorSet::new(n, gens).expect("common degree")
}

fn factorial(rep: &mut SuiteReport) {
    for n in 3..=7usize {
        let expected: BigUint = (1..=n).map(BigUint::from).product();
        let got = transpositions(n).order();
        rep.record(format_args!("n={n}"), if got == expected { Ok(()) } else { Err(format!("{got} != {expected}")) });
    }
}

/// A random generating set on at most 7 points and probes: random
/// permutations and random group elements.
pub fn group_case(rng: &mut impl Rng) -> (GeneratorSet, Vec<Permutation>) {
    let n = rng.gen_range(1..=7);
    let s = random_generator_set(rng, n, 3);
    let mut probes: Vec<Permutation> = (0..4).map(|_| random_permutation(rng, n)).collect();
    probes.extend((0..4).map(|_| random_element(rng, &s)));
    (s, probes)
}

pub fn check_closure_oracle(s: &GeneratorSet, probes: &[Permutation]) -> Check {
    let closure = closure_bruteforce(s, 5040).map_err(msg)?;
    let chain = StabilizerChain::build(s);
    ensure!(chain.order() == BigUint::from(closure.len()), "order {} vs closure {}", chain.order(), closure.len());
    for p in probes {
        let c = chain.contains(p).map_err(msg)?;
        ensure!(c == closure.contains(p), "contains({p}) = {c} disagrees with the closure");
    }
    Ok(())
}

pub fn check_membership_law(s: &GeneratorSet, probes: &[Permutation]) -> Check {
    let chain = StabilizerChain::build(s);
    for p in probes {
        let by_order = membership_by_order(s, p).map_err(msg)?;
        let c = chain.contains(p).map_err(msg)?;
        ensure!(by_order == c, "membership_by_order({p}) = {by_order}, contains = {c}");
    }
    Ok(())
}

fn closure_oracle(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 1);
        for k in 0..10 {
            let (s, probes) = group_case(&mut rng);
            rep.record(format_args!("seed {seed} case {k}"), check_closure_oracle(&s, &probes));
        }
    }
}

fn membership_law(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        // same cases as the closure suite
        let mut rng = rng_for(seed, 1);
        for k in 0..10 {
            let (s, probes) = group_case(&mut rng);
            rep.record(format_args!("seed {seed} case {k}"), check_membership_law(&s, &probes));
        }
    }
}

/// Multiplicativity on random pairs, the first isomorphism theorem, kernel
/// and image against brute force, the tensor kernel law and coset
/// membership, for one `(G, m)` instance.
pub fn check_morphism_laws(s: &GeneratorSet, m: &PermMorphism, rng: &mut impl Rng) -> Check {
    for _ in 0..50 {
        let (x, y) = (random_element(rng, s), random_element(rng, s));
        let lhs = m.evaluate(&(&x * &y)).map_err(msg)?;
        let rhs = &m.evaluate(&x).map_err(msg)? * &m.evaluate(&y).map_err(msg)?;
        ensure!(lhs == rhs, "m({x} {y}) != m({x}) m({y})");
    }
    let closure = closure_bruteforce(s, 5040).map_err(msg)?;
    let mut kernel = HashSet::new();
    let mut image = HashSet::new();
    for x in &closure {
        let v = m.evaluate(x).map_err(msg)?;
        if v.is_identity() {
            kernel.insert(x.clone());
        }
        image.insert(v);
    }
    let ker = kernel_order(m, s).map_err(msg)?;
    let im = image_chain(m, s).map_err(msg)?.order();
    ensure!(ker == BigUint::from(kernel.len()), "kernel order {ker} vs brute force {}", kernel.len());
    ensure!(im == BigUint::from(image.len()), "image order {im} vs brute force {}", image.len());
    ensure!(&ker * &im == BigUint::from(closure.len()), "|ker| |im| = {} but |G| = {}", &ker * &im, closure.len());
    for x in &closure {
        let k = kernel_contains(m, s, x).map_err(msg)?;
        ensure!(k == kernel.contains(x), "kernel_contains({x}) = {k}");
    }

    for (other, name) in [(m.clone(), "m"), (PermMorphism::identity_on(s), "id")] {
        let t = tensor(&[m.clone(), other.clone()]).map_err(msg)?;
        let expected = closure
            .iter()
            .filter(|x| kernel.contains(*x) && other.evaluate(x).is_ok_and(|v| v.is_identity()))
            .count();
        let got = kernel_order(&t, s).map_err(msg)?;
        ensure!(got == BigUint::from(expected), "ker(m ⊗ {name}) has order {got}, expected {expected}");
    }

    let v = m.evaluate(&random_element(rng, s)).map_err(msg)?;
    let coset = MorphismCoset::new(s.clone(), m.clone(), v.clone()).map_err(msg)?;
    ensure!(coset_size(&coset).map_err(msg)? == ker, "coset size differs from the kernel order");
    for x in &closure {
        let inside = coset.contains(x).map_err(msg)?;
        ensure!(inside == (m.evaluate(x).map_err(msg)? == v), "coset membership of {x}");
    }
    for _ in 0..20 {
        let w = random_permutation(rng, m.codomain_degree());
        if !image.contains(&w) {
            let c = MorphismCoset::new(s.clone(), m.clone(), w).map_err(msg)?;
            ensure!(coset_is_empty(&c).map_err(msg)?, "coset at a value outside the image is nonempty");
            break;
        }
    }
    Ok(())
}

fn morphism_laws(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 2);
        for k in 0..5 {
            let check = random_morphism_instance(&mut rng)
                .map_err(msg)
                .and_then(|(s, m)| check_morphism_laws(&s, &m, &mut rng));
            rep.record(format_args!("seed {seed} case {k}"), check);
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, modulus: u64, max_rows: usize, max_cols: usize) -> MatrixModP {
    let r = rng.gen_range(1..=max_rows);
    let c = rng.gen_range(1..=max_cols);
    let rows = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..modulus)).collect()).collect();
    MatrixModP::new(modulus, rows).expect("rectangular")
}

/// A target vector that is in the row span about half the time.
pub fn random_target(rng: &mut impl Rng, m: &MatrixModP) -> VecModM {
    let p = m.modulus();
    let y = if rng.gen_bool(0.5) {
        let mut y = vec![0; m.cols()];
        for row in m.entries() {
            let x = rng.gen_range(0..p);
            for (yj, &r) in y.iter_mut().zip(row) {
                *yj = (*yj + x * r) % p;
            }
        }
        y
    } else {
        (0..m.cols()).map(|_| rng.gen_range(0..p)).collect()
    };
    VecModM::new(p, y).expect("modulus at least 2")
}

pub fn check_rank(m: &MatrixModP) -> Check {
    let r = rank_p(m).map_err(msg)?;
    let g = gauss_rank(m).map_err(msg)?;
    ensure!(r == g, "rank_p {r} vs elimination {g}");
    let order = image_group_generators(m).order();
    ensure!(order == BigUint::from(m.modulus()).pow(r as u32), "image order {order} is not p^{r}");
    Ok(())
}

pub fn check_solvable_prime(m: &MatrixModP, y: &VecModM) -> Check {
    let mut aug = m.entries().to_vec();
    aug.push(y.entries().to_vec());
    let aug = MatrixModP::with_cols(m.modulus(), m.cols(), aug).map_err(msg)?;
    let expected = gauss_rank(&aug).map_err(msg)? == gauss_rank(m).map_err(msg)?;
    let got = solvable_mod_m(m, y).map_err(msg)?;
    ensure!(got == expected, "solvable = {got}, augmented rank says {expected}");
    Ok(())
}

pub fn check_solvable_composite(m: &MatrixModP, y: &VecModM) -> Check {
    let image = image_bruteforce(m, 10_000).map_err(msg)?;
    let expected = image.contains(y.entries());
    let got = solvable_mod_m(m, y).map_err(msg)?;
    ensure!(got == expected, "solvable = {got}, image enumeration says {expected}");
    Ok(())
}

fn rank_oracle(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 3);
        for k in 0..25 {
            let p = [2, 3, 5, 7][rng.gen_range(0..4)];
            let m = random_matrix(&mut rng, p, 8, 8);
            rep.record(format_args!("seed {seed} case {k}"), check_rank(&m));
        }
    }
}

fn res_consistency(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 4);
        for k in 0..10 {
            let p = [2, 3, 5, 7][rng.gen_range(0..4)];
            let m = random_matrix(&mut rng, p, 6, 6);
            let y = random_target(&mut rng, &m);
            rep.record(format_args!("seed {seed} prime {k}"), check_solvable_prime(&m, &y));
        }
        for k in 0..3 {
            let q = [4, 6, 8, 9, 10, 12][rng.gen_range(0..6)];
            let m = random_matrix(&mut rng, q, 3, 3);
            let y = random_target(&mut rng, &m);
            rep.record(format_args!("seed {seed} composite {k}"), check_solvable_composite(&m, &y));
        }
    }
}

/// The greedy canonizer against exhaustive search. Under
/// `corrupt_convention` the canonizer runs with the reversed comparison.
pub fn check_canon_oracle(g: &AbelianColoredGraph, cap: usize, corrupt: bool) -> Check {
    let conv = if corrupt { Convention::Reversed } else { Convention::EdgesFirst };
    let (fast, _) = canonize_with(g, conv).map_err(msg)?;
    let slow = canon_oracle(g, cap).map_err(msg)?;
    ensure!(fast == slow, "canonize {} differs from oracle {}", fast.to_json().trim_end(), slow.to_json().trim_end());
    Ok(())
}

fn canon_oracle_suite(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 5);
        for k in 0..5 {
            let check = gen::random_instance(&mut rng, 5, 6, opts.cap.min(2000))
                .and_then(|f| f.to_graph())
                .map_err(msg)
                .and_then(|g| check_canon_oracle(&g, opts.cap, opts.corrupt_convention));
            rep.record(format_args!("seed {seed} case {k}"), check);
        }
    }
}

/// Canonical bytes of `f` and of `relabelings` random relabelings agree.
pub fn check_relabel_invariance(f: &ColoredGraphFile, relabelings: usize, rng: &mut impl Rng) -> Check {
    let raw = f.to_raw();
    let bytes = canonize(&crate::canon::validate(&raw).map_err(msg)?).map_err(msg)?.to_json();
    for k in 0..relabelings {
        let other = gen::relabel(&raw, rng);
        let b = canonize(&crate::canon::validate(&other).map_err(msg)?).map_err(msg)?.to_json();
        ensure!(b == bytes, "relabeling {k} changed the canonical form");
    }
    Ok(())
}

fn cfi_form(name: &str, twisted: bool, twist: usize, seed: u64) -> Result<CanonicalForm> {
    let (v, e) = gen::named_base(name)?;
    canonize(&gen::cfi(v, &e, twisted, twist, seed)?.to_graph()?)
}

/// Untwisted copies agree across seeds, twisted copies agree across seeds
/// and twist positions, and the two variants differ.
pub fn check_cfi_pair(name: &str, seed: u64) -> Check {
    let (v, _) = gen::named_base(name).map_err(msg)?;
    let u1 = cfi_form(name, false, 0, seed).map_err(msg)?;
    let u2 = cfi_form(name, false, 0, seed + 1).map_err(msg)?;
    let t1 = cfi_form(name, true, 0, seed).map_err(msg)?;
    let t2 = cfi_form(name, true, v - 1, seed + 2).map_err(msg)?;
    ensure!(u1 == u2, "{name}: untwisted forms differ across seeds");
    ensure!(t1 == t2, "{name}: twisted forms differ across twist positions");
    ensure!(u1 != t1, "{name}: twisted and untwisted forms coincide");
    Ok(())
}

pub const CFI_BASES: [&str; 5] = ["triangle", "k4", "k33", "prism", "cube"];

fn canon_invariance(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 6);
        for k in 0..3 {
            let check = gen::random_instance(&mut rng, 5, 6, 10_000)
                .map_err(msg)
                .and_then(|f| check_relabel_invariance(&f, 5, &mut rng));
            rep.record(format_args!("seed {seed} case {k}"), check);
        }
        let base = CFI_BASES[(seed % CFI_BASES.len() as u64) as usize];
        rep.record(format_args!("seed {seed} cfi {base}"), check_cfi_pair(base, seed));
    }
}

fn anchor_tuples(g: &AbelianColoredGraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 0..g.num_classes() {
        out = out
            .into_iter()
            .flat_map(|t| {
                g.class(i).iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

fn pair_labeling(g: &AbelianColoredGraph, i: usize, a: usize, j: usize, b: usize) -> Result<PartialLabeling> {
    oplus(&local_labeling(g, i, a)?, &local_labeling(g, j, b)?)
}

fn full_labeling(g: &AbelianColoredGraph, anchors: &[usize]) -> Result<PartialLabeling> {
    let mut l = PartialLabeling::default();
    for (i, &a) in anchors.iter().enumerate() {
        l = l.oplus(&local_labeling(g, i, a)?.into())?;
    }
    Ok(l)
}

/// The structural lemmas behind the canonizer, checked exhaustively on the
/// refined form of `g`: labelings of a class form one coset of its group;
/// the group encoding does not depend on the anchor; `m_init` is
/// multiplicative on `𝒢`; its fiber over `v_init` is exactly the set of
/// anchor-tuple images; block morphism agreement is block encoding
/// agreement; minimizing pairs share one block value; and the final coset
/// holds an anchor tuple reproducing the canonical edges. `closure_cap`
/// bounds the enumeration of `𝒢`.
pub fn check_structural(g: &AbelianColoredGraph, closure_cap: usize, rng: &mut impl Rng) -> Check {
    let r = refine_intra(g).map_err(msg)?;
    let m = r.num_classes();

    for i in 0..m {
        let s = r.class_size(i);
        for a in 0..s {
            for b in 0..s {
                let found = (0..s).any(|mu| (0..s).all(|x| r.label(i, b, x) == r.label(i, a, r.phi(i)[mu][x])));
                ensure!(found, "class {i}: labelings of anchors {a} and {b} are not in one coset");
            }
        }
        let encode = |a: usize| -> Vec<Vec<usize>> {
            (0..s)
                .map(|j| (0..s).map(|mu| r.label(i, a, r.phi(i)[j][r.phi(i)[mu][a]])).collect())
                .collect()
        };
        let first = encode(0);
        ensure!((1..s).all(|a| encode(a) == first), "class {i}: group encoding depends on the anchor");
    }

    let ambient = group_g_generators(&r);
    for _ in 0..30 {
        let (x, y) = (random_element(rng, &ambient), random_element(rng, &ambient));
        let lhs = m_init_eval(&r, &(&x * &y)).map_err(msg)?;
        let rhs = &m_init_eval(&r, &x).map_err(msg)? * &m_init_eval(&r, &y).map_err(msg)?;
        ensure!(lhs == rhs, "m_init is not multiplicative");
    }

    let tuples = anchor_tuples(&r);
    let images: HashSet<Permutation> = tuples
        .iter()
        .map(|t| phi_of_anchors(&r, t))
        .collect::<Result<_>>()
        .map_err(msg)?;
    let v0 = v_init(&r);
    let mut fiber = HashSet::new();
    for x in closure_bruteforce(&ambient, closure_cap).map_err(msg)? {
        if m_init_eval(&r, &x).map_err(msg)? == v0 {
            fiber.insert(x);
        }
    }
    ensure!(fiber == images, "fiber of v_init has {} elements, anchor tuples give {}", fiber.len(), images.len());

    for i in 0..m {
        for j in i + 1..m {
            let edges = r.block_edges(i, j);
            let mut values = Vec::new();
            for &a in r.class(i) {
                for &b in r.class(j) {
                    let enc = encode_relative(&edges, &pair_labeling(&r, i, a, j, b).map_err(msg)?).map_err(msg)?;
                    values.push((v_ij(&r, i, j, a, b).map_err(msg)?, enc));
                }
            }
            for t in &tuples {
                let theta = theta_eval(&r, i, j, &phi_of_anchors(&r, t).map_err(msg)?).map_err(msg)?;
                let own = encode_relative(&edges, &pair_labeling(&r, i, t[i], j, t[j]).map_err(msg)?).map_err(msg)?;
                for (v, enc) in &values {
                    ensure!(
                        (theta == *v) == (own == *enc),
                        "block ({i}, {j}), anchors {t:?}: block value and block encoding disagree"
                    );
                }
            }
        }
    }

    let mut state = CanonState::new(r.clone(), Convention::EdgesFirst).map_err(msg)?;
    for i in 0..m {
        for j in i + 1..m {
            let (winners, _) = state.min_pairs(i, j).map_err(msg)?;
            let first = v_ij(&r, i, j, winners[0].0, winners[0].1).map_err(msg)?;
            for &(a, b) in &winners[1..] {
                ensure!(v_ij(&r, i, j, a, b).map_err(msg)? == first, "block ({i}, {j}): winners ({a}, {b}) differ");
            }
            state.step(i, j).map_err(msg)?;
        }
    }
    let form = state.canonical_form().map_err(msg)?;
    let w = witness(&state, usize::MAX).map_err(msg)?;
    let all: Vec<_> = r.edges().iter().copied().collect();
    let enc = encode_relative(&all, &full_labeling(&r, &w).map_err(msg)?).map_err(msg)?;
    ensure!(enc == form.edges, "witness labeling does not reproduce the canonical edges");
    Ok(())
}

fn structural(rep: &mut SuiteReport, opts: &Options) {
    let mut rng = rng_for(0, 7);
    rep.record("fixture B", check_structural(&fixtures::b(), 100_000, &mut rng));
    rep.record("fixture C4", check_structural(&fixtures::c4(), 100_000, &mut rng));
    for &seed in &opts.seeds {
        let mut rng = rng_for(seed, 7);
        let check = gen::random_instance(&mut rng, 3, 4, 64)
            .and_then(|f| f.to_graph())
            .map_err(msg)
            .and_then(|g| check_structural(&g, 100_000, &mut rng));
        rep.record(format_args!("seed {seed}"), check);
    }
}

fn round_trip<T>(x: &T) -> Check
where
    T: serde::Serialize + for<'de> serde::Deserialize<'de> + PartialEq + fmt::Debug,
{
    let back: T = io::parse(&io::to_json(x)).map_err(msg)?;
    ensure!(back == *x, "round trip changed {x:?}");
    Ok(())
}

/// Generator validity, determinism and round trips for every file type.
pub fn check_io(seed: u64) -> Check {
    let mut rng = rng_for(seed, 8);
    let (v, e) = gen::named_base(CFI_BASES[(seed % 5) as usize]).map_err(msg)?;
    let sizes: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=6)).collect();
    let make = |k: usize| -> Result<ColoredGraphFile> {
        match k {
            0 => gen::cyclic(&sizes, 0.3, gen::IntraEdges::Random, seed),
            1 => gen::bipartite(sizes[0], 3, 0.5, seed),
            2 => gen::abelian(&sizes, 0.3, gen::IntraEdges::Cycle, seed),
            _ => gen::cfi(v, &e, seed.is_multiple_of(2), 0, seed),
        }
    };
    for k in 0..4 {
        let f = make(k).map_err(msg)?;
        ensure!(io::to_json(&f) == io::to_json(&make(k).map_err(msg)?), "generator kind {k} is not deterministic");
        let g = f.to_graph().map_err(|e| format!("generator kind {k} produced an invalid graph: {e}"))?;
        round_trip(&f)?;
        let form = canonize(&g).map_err(msg)?;
        ensure!(form.to_json() == canonize(&g).map_err(msg)?.to_json(), "canonize is not deterministic");
        round_trip(&form)?;
    }
    let (s, _) = group_case(&mut rng);
    round_trip(&GroupFile::from_generator_set(&s))?;
    let back = GroupFile::from_generator_set(&s).to_generator_set().map_err(msg)?;
    ensure!(back.gens() == s.gens(), "group file changed the generators");
    let m = random_matrix(&mut rng, 5, 4, 4);
    round_trip(&MatrixFile {
        modulus: m.modulus(),
        rows: m.entries().to_vec(),
    })?;
    Ok(())
}

fn io_suite(rep: &mut SuiteReport, opts: &Options) {
    for &seed in &opts.seeds {
        rep.record(format_args!("seed {seed}"), check_io(seed));
    }
}
