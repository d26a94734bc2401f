//! Seeded instance generators. Every output passes validation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::RawColoredGraph;
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::io::{ColoredGraphFile, GenHeader};
use crate::morphism::{embed_family, tensor, PermMorphism};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntraEdges {
    None,
    /// The directed cycle `x -> x+1` inside each class.
    Cycle,
    /// Random directed pairs inside each class, at the inter-class density.
    Random,
}

impl std::str::FromStr for IntraEdges {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(IntraEdges::None),
            "cycle" => Ok(IntraEdges::Cycle),
            "random" => Ok(IntraEdges::Random),
            _ => Err(Error::Parse(format!("unknown intra-class edge mode {s:?}"))),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_density(density: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parse(format!("density {density} is outside [0, 1]")));
    }
    Ok(())
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Parse("class sizes must be positive and nonempty".into()));
    }
    Ok(())
}

fn consecutive_classes(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let c = (start..start + s).collect();
            start += s;
            c
        })
        .collect()
}

fn random_edges(rng: &mut ChaCha8Rng, classes: &[Vec<usize>], density: f64, intra: IntraEdges) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (ci, a) in classes.iter().enumerate() {
        for (cj, b) in classes.iter().enumerate() {
            if ci == cj && intra != IntraEdges::Random {
                continue;
            }
            for &u in a {
                for &v in b {
                    if u != v && rng.gen_bool(density) {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    if intra == IntraEdges::Cycle {
        for c in classes {
            if c.len() > 1 {
                edges.extend((0..c.len()).map(|k| (c[k], c[(k + 1) % c.len()])));
            }
        }
    }
    edges
}

fn header(kind: &str, seed: u64) -> Option<GenHeader> {
    Some(GenHeader {
        kind: kind.into(),
        seed,
        ..GenHeader::default()
    })
}

/// Classes of the given sizes on consecutive points, each with `Z_s`
/// enumerated as `γ_j(x) = x + j`, plus random directed inter-class edges.
pub fn cyclic(sizes: &[usize], density: f64, intra: IntraEdges, seed: u64) -> Result<ColoredGraphFile> {
    check_sizes(sizes)?;
    check_density(density)?;
    let mut rng = rng(seed);
    let classes = consecutive_classes(sizes);
    let edges = random_edges(&mut rng, &classes, density, intra);
    let phi = sizes
        .iter()
        .map(|&s| (0..s).map(|j| (0..s).map(|x| (x + j) % s).collect()).collect())
        .collect();
    Ok(ColoredGraphFile {
        header: header("cyclic", seed),
        n: sizes.iter().sum(),
        classes,
        undirected: false,
        edges,
        phi,
    })
}

/// Two cyclic classes joined by random undirected edges.
pub fn bipartite(s1: usize, s2: usize, density: f64, seed: u64) -> Result<ColoredGraphFile> {
    check_sizes(&[s1, s2])?;
    check_density(density)?;
    let mut rng = rng(seed);
    let classes = consecutive_classes(&[s1, s2]);
    let edges = classes[0]
        .iter()
        .flat_map(|&u| classes[1].iter().map(move |&v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let phi = [s1, s2]
        .iter()
        .map(|&s| (0..s).map(|j| (0..s).map(|x| (x + j) % s).collect()).collect())
        .collect();
    Ok(ColoredGraphFile {
        header: header("bipartite", seed),
        n: s1 + s2,
        classes,
        undirected: true,
        edges,
        phi,
    })
}

/// Random ordered factorization of `s` into factors of at least 2.
fn random_factors(rng: &mut ChaCha8Rng, mut s: usize) -> Vec<usize> {
    let mut factors = Vec::new();
    while s > 1 {
        let divisors: Vec<usize> = (2..=s).filter(|d| s.is_multiple_of(*d)).collect();
        let d = *divisors.choose(rng).expect("s > 1 has a divisor");
        factors.push(d);
        s /= d;
    }
    factors
}

/// Regular action of a random abelian group of order `s`, with points and
/// enumeration order both shuffled. Returns class-local image sequences.
fn random_abelian_class(rng: &mut ChaCha8Rng, s: usize) -> Vec<Vec<usize>> {
    let radix = random_factors(rng, s);
    let add = |x: usize, y: usize| {
        let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
        for &r in &radix {
            out += ((x % r + y % r) % r) * place;
            x /= r;
            y /= r;
            place *= r;
        }
        out
    };
    // point k carries element pi[k]
    let mut pi: Vec<usize> = (0..s).collect();
    pi.shuffle(rng);
    let mut pos = vec![0; s];
    for (k, &e) in pi.iter().enumerate() {
        pos[e] = k;
    }
    let mut order: Vec<usize> = (0..s).collect();
    order.shuffle(rng);
    order
        .iter()
        .map(|&t| (0..s).map(|x| pos[add(pi[x], t)]).collect())
        .collect()
}

/// Like [`cyclic`], but each class carries a random abelian group (any
/// factorization of its size) with a shuffled enumeration.
pub fn abelian(sizes: &[usize], density: f64, intra: IntraEdges, seed: u64) -> Result<ColoredGraphFile> {
    check_sizes(sizes)?;
    check_density(density)?;
    let mut rng = rng(seed);
    let classes = consecutive_classes(sizes);
    let phi = sizes.iter().map(|&s| random_abelian_class(&mut rng, s)).collect();
    let edges = random_edges(&mut rng, &classes, density, intra);
    Ok(ColoredGraphFile {
        header: header("abelian", seed),
        n: sizes.iter().sum(),
        classes,
        undirected: false,
        edges,
        phi,
    })
}

/// Named base graphs: vertex count and ordered edge list.
pub fn named_base(name: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let complete = |n: usize| (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    Ok(match name {
        "triangle" => (3, complete(3)),
        "k4" => (4, complete(4)),
        "k33" => (6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()),
        "prism" => (6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]),
        "cube" => (
            8,
            (0..8usize)
                .flat_map(|a| (0..3).map(move |k| (a, a ^ (1 << k))))
                .filter(|&(a, b)| a < b)
                .collect(),
        ),
        _ => return Err(Error::Parse(format!("unknown base graph {name:?}"))),
    })
}

/// Gadget construction over a base graph. Vertex `v` of degree `d` becomes a
/// class of the `2^(d-1)` bit vectors over its incident edges with parity
/// `t_v`, acted on by the even-parity translations; each base edge becomes a
/// class of two points acted on by the swap. A gadget point `x` is joined to
/// point `x_k` of its `k`-th incident edge. `t_v = 1` only for the twisted
/// vertex. The seed shuffles point identities.
pub fn cfi(
    vertices: usize,
    base_edges: &[(usize, usize)],
    twisted: bool,
    twist_vertex: usize,
    seed: u64,
) -> Result<ColoredGraphFile> {
    let mut incident = vec![Vec::new(); vertices];
    for (e, &(a, b)) in base_edges.iter().enumerate() {
        if a >= vertices || b >= vertices || a == b {
            return Err(Error::Parse(format!("bad base edge ({a}, {b})")));
        }
        incident[a].push(e);
        incident[b].push(e);
    }
    if incident.iter().any(Vec::is_empty) {
        return Err(Error::Parse("base graph has an isolated vertex".into()));
    }
    if twist_vertex >= vertices {
        return Err(Error::Parse(format!("twist vertex {twist_vertex} out of range")));
    }

    let mut classes = Vec::new();
    let mut phi = Vec::new();
    let mut gadget_points: Vec<Vec<u32>> = Vec::new();
    let mut next = 0;
    for v in 0..vertices {
        let d = incident[v].len();
        let parity = u32::from(twisted && v == twist_vertex);
        let points: Vec<u32> = (0..1u32 << d).filter(|x| x.count_ones() % 2 == parity).collect();
        let translations: Vec<u32> = (0..1u32 << d).filter(|y| y.count_ones() % 2 == 0).collect();
        let index = |x: u32| points.binary_search(&x).expect("parity is preserved");
        phi.push(
            translations
                .iter()
                .map(|&y| points.iter().map(|&x| index(x ^ y)).collect())
                .collect(),
        );
        classes.push((next..next + points.len()).collect::<Vec<_>>());
        next += points.len();
        gadget_points.push(points);
    }
    let edge_base = next;
    for e in 0..base_edges.len() {
        classes.push(vec![edge_base + 2 * e, edge_base + 2 * e + 1]);
        phi.push(vec![vec![0, 1], vec![1, 0]]);
    }
    let n = edge_base + 2 * base_edges.len();

    let mut edges = Vec::new();
    for v in 0..vertices {
        for (k, &x) in gadget_points[v].iter().enumerate() {
            for (bit, &e) in incident[v].iter().enumerate() {
                edges.push((classes[v][k], edge_base + 2 * e + ((x >> bit) & 1) as usize));
            }
        }
    }

    let mut rng = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    Ok(ColoredGraphFile {
        header: Some(GenHeader {
            kind: "cfi".into(),
            seed,
            base_vertices: Some(vertices),
            base_edges: Some(base_edges.to_vec()),
            twisted: Some(twisted),
            twist_vertex: twisted.then_some(twist_vertex),
        }),
        n,
        classes: classes.iter().map(|c| c.iter().map(|&p| perm[p]).collect()).collect(),
        undirected: true,
        edges: edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
        phi,
    })
}

/// A random admissible relabeling: points are renamed, class listings are
/// reordered, and each enumeration is conjugated entry by entry. Class order
/// and enumeration order are kept.
pub fn relabel(raw: &RawColoredGraph, rng: &mut impl Rng) -> RawColoredGraph {
    let mut perm: Vec<usize> = (0..raw.n).collect();
    perm.shuffle(rng);
    let mut classes = Vec::with_capacity(raw.classes.len());
    let mut phi = Vec::with_capacity(raw.classes.len());
    for (class, gammas) in raw.classes.iter().zip(&raw.phi) {
        let s = class.len();
        // new position k holds old position order[k]
        let mut order: Vec<usize> = (0..s).collect();
        order.shuffle(rng);
        let mut new_pos = vec![0; s];
        for (k, &o) in order.iter().enumerate() {
            new_pos[o] = k;
        }
        classes.push(order.iter().map(|&o| perm[class[o]]).collect());
        phi.push(
            gammas
                .iter()
                .map(|g| order.iter().map(|&o| new_pos[g[o]]).collect())
                .collect(),
        );
    }
    let mut edges: Vec<(usize, usize)> = raw.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    edges.shuffle(rng);
    RawColoredGraph {
        n: raw.n,
        classes,
        edges,
        phi,
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_images(v).expect("a shuffle is a bijection")
}

/// Up to `max_gens` random permutations of `n` points.
pub fn random_generator_set(rng: &mut impl Rng, n: usize, max_gens: usize) -> GeneratorSet {
    let k = rng.gen_range(0..=max_gens);
    GeneratorSet::new(n, (0..k).map(|_| random_permutation(rng, n)).collect()).expect("common degree")
}

/// Random element of `⟨s⟩` as a product of up to 12 generators.
pub fn random_element(rng: &mut impl Rng, s: &GeneratorSet) -> Permutation {
    let mut x = Permutation::identity(s.degree());
    if s.is_empty() {
        return x;
    }
    for _ in 0..rng.gen_range(0..=12) {
        x = &s.gens()[rng.gen_range(0..s.len())] * &x;
    }
    x
}

fn parity(p: &Permutation) -> usize {
    let mut seen = vec![false; p.degree()];
    let mut cycles = 0;
    for x in 0..p.degree() {
        if !seen[x] {
            cycles += 1;
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                y = p.apply(y);
            }
        }
    }
    (p.degree() - cycles) % 2
}

/// Projection of a layered product onto the layers in `keep`.
fn projection(d: usize, tags: &[usize], product: &GeneratorSet, keep: &[usize]) -> Result<PermMorphism> {
    let images = product
        .gens()
        .iter()
        .zip(tags)
        .map(|(g, &t)| match keep.iter().position(|&k| k == t) {
            Some(slot) => {
                let mut images: Vec<usize> = (0..keep.len() * d).collect();
                for x in 0..d {
                    images[slot * d + x] = slot * d + g.apply(t * d + x) - t * d;
                }
                Permutation::from_images(images)
            }
            None => Ok(Permutation::identity(keep.len() * d)),
        })
        .collect::<Result<Vec<_>>>()?;
    let t = crate::morphism::TableMorphism::with_codomain(product.clone(), images, keep.len() * d)?;
    Ok(PermMorphism::Table(std::sync::Arc::new(t)))
}

/// A small group with a morphism on it, of one of four shapes: projection of
/// a product onto some factors, a pair of such projections tensored, the sign
/// map, or a cyclic quotient. Every group has at most 2000 elements.
pub fn random_morphism_instance(rng: &mut impl Rng) -> Result<(GeneratorSet, PermMorphism)> {
    match rng.gen_range(0..4) {
        0 | 1 => {
            let k = rng.gen_range(1..=3);
            let d = if k == 3 { 3 } else { 4 };
            let members: Vec<GeneratorSet> = (0..k).map(|_| random_generator_set(rng, d, 2)).collect();
            let tags: Vec<usize> = members.iter().enumerate().flat_map(|(t, m)| vec![t; m.len()]).collect();
            let product = embed_family(d, &members)?;
            let pick = |rng: &mut dyn rand::RngCore| -> Vec<usize> { (0..k).filter(|_| rng.gen_bool(0.5)).collect() };
            let m1 = projection(d, &tags, &product, &pick(rng))?;
            let m = if rng.gen_bool(0.5) {
                m1
            } else {
                let m2 = projection(d, &tags, &product, &pick(rng))?;
                tensor(&[m1, m2])?
            };
            Ok((product, m))
        }
        2 => {
            let n = rng.gen_range(2..=6);
            let s = random_generator_set(rng, n, 3);
            let images = s
                .gens()
                .iter()
                .map(|g| {
                    if parity(g) == 1 {
                        Permutation::from_images(vec![1, 0])
                    } else {
                        Ok(Permutation::identity(2))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let t = crate::morphism::TableMorphism::with_codomain(s.clone(), images, 2)?;
            Ok((s, PermMorphism::Table(std::sync::Arc::new(t))))
        }
        _ => {
            let n = rng.gen_range(1..=12);
            let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
            let d = *divisors.choose(rng).expect("1 divides n");
            let cycle = Permutation::from_images((0..n).map(|x| (x + 1) % n).collect())?;
            let image = Permutation::from_images((0..d).map(|x| (x + 1) % d).collect())?;
            let s = GeneratorSet::new(n, vec![cycle])?;
            let t = crate::morphism::TableMorphism::new(s.clone(), vec![image])?;
            Ok((s, PermMorphism::Table(std::sync::Arc::new(t))))
        }
    }
}

/// A random cyclic, abelian or bipartite instance with at most `max_classes`
/// classes of size at most `max_size` and `∏|A_i| <= max_product`.
pub fn random_instance(
    rng: &mut impl Rng,
    max_classes: usize,
    max_size: usize,
    max_product: usize,
) -> Result<ColoredGraphFile> {
    let m = rng.gen_range(1..=max_classes);
    let mut sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=max_size)).collect();
    while sizes.iter().product::<usize>() > max_product {
        let k = rng.gen_range(0..m);
        sizes[k] = (sizes[k] / 2).max(1);
    }
    let density = *[0.15, 0.3, 0.5].choose(rng).expect("nonempty");
    let intra = *[IntraEdges::None, IntraEdges::Cycle, IntraEdges::Random].choose(rng).expect("nonempty");
    let seed = rng.gen();
    match rng.gen_range(0..5) {
        0 if m == 2 => bipartite(sizes[0], sizes[1], density, seed),
        0 | 1 => cyclic(&sizes, density, intra, seed),
        _ => abelian(&sizes, density, intra, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::validate;
    use crate::io::{parse, to_json};

    #[test]
    fn generated_instances_validate() {
        for seed in 0..20 {
            cyclic(&[3, 4, 2], 0.3, IntraEdges::Random, seed).unwrap().to_graph().unwrap();
            abelian(&[4, 6, 8, 1], 0.2, IntraEdges::Random, seed).unwrap().to_graph().unwrap();
            bipartite(2, 2, 0.5, seed).unwrap().to_graph().unwrap();
        }
        for name in ["triangle", "k4", "k33", "prism", "cube"] {
            let (v, e) = named_base(name).unwrap();
            for twisted in [false, true] {
                cfi(v, &e, twisted, 0, 3).unwrap().to_graph().unwrap();
            }
        }
    }

    #[test]
    fn cyclic_cycle_is_the_c4_fixture() {
        let f = cyclic(&[4], 0.0, IntraEdges::Cycle, 1).unwrap();
        let g = f.to_graph().unwrap();
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(g.phi(0)[1], vec![1, 2, 3, 0]);
    }

    #[test]
    fn cfi_groups_have_exponent_two() {
        let (v, e) = named_base("triangle").unwrap();
        let g = cfi(v, &e, true, 0, 9).unwrap().to_graph().unwrap();
        for i in 0..g.num_classes() {
            for j in 0..g.class_size(i) {
                assert_eq!(g.mul(i, j, j), g.identity_index(i));
            }
        }
    }

    #[test]
    fn deterministic_and_round_trips() {
        let a = to_json(&abelian(&[4, 4], 0.5, IntraEdges::None, 11).unwrap());
        let b = to_json(&abelian(&[4, 4], 0.5, IntraEdges::None, 11).unwrap());
        assert_eq!(a, b);
        let f: ColoredGraphFile = parse(&a).unwrap();
        assert_eq!(to_json(&f), a);
        let (v, e) = named_base("k33").unwrap();
        let c = cfi(v, &e, true, 2, 5).unwrap();
        assert_eq!(parse::<ColoredGraphFile>(&to_json(&c)).unwrap(), c);
    }

    #[test]
    fn relabel_preserves_validity() {
        let raw = abelian(&[6, 4, 3], 0.3, IntraEdges::Random, 2).unwrap().to_raw();
        let mut r = rng(5);
        for _ in 0..10 {
            validate(&relabel(&raw, &mut r)).unwrap();
        }
    }

    #[test]
    fn random_morphisms_are_morphisms() {
        let mut r = rng(17);
        for _ in 0..40 {
            let (s, m) = random_morphism_instance(&mut r).unwrap();
            for _ in 0..10 {
                let (x, y) = (random_element(&mut r, &s), random_element(&mut r, &s));
                assert_eq!(m.evaluate(&(&x * &y)).unwrap(), &m.evaluate(&x).unwrap() * &m.evaluate(&y).unwrap());
            }
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(cyclic(&[], 0.5, IntraEdges::None, 0).is_err());
        assert!(cyclic(&[2], 1.5, IntraEdges::None, 0).is_err());
        assert!(named_base("petersen2").is_err());
        assert!(cfi(3, &[(0, 1)], false, 0, 0).is_err());
    }
}
