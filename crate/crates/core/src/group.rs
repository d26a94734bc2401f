//! Generating sets and deterministic Schreier–Sims stabilizer chains.
//!
//! [`StabilizerChain::build`] runs the incremental Schreier–Sims algorithm:
//! input generators are sifted one at a time, and every Schreier generator is
//! sifted immediately and dropped when it reduces to the identity. Base points
//! are the smallest points moved by the residues that create new levels, so
//! chains are reproducible for a fixed generator order.
//!
//! Transversals are stored as Schreier trees (one labelled edge per orbit
//! point) rather than explicit coset representatives, which keeps memory at
//! one word per point and level even on large tagged domains.
//!
//! When the generators commute, sifting tracks only one point per nontrivial
//! orbit of the whole group: an element of an abelian group that fixes a point
//! fixes its entire orbit, so an element is determined by its images on the
//! orbit roots. Full images are rebuilt from those along a spanning forest of
//! the orbits, since `u(g(x)) = g(u(x))`.

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Exact group orders; these reach `degree!` and need arbitrary precision.
pub type BigCard = BigUint;

/// A finite list of permutations of a common degree. Duplicates and the
/// identity are allowed; an empty list generates the trivial group.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    degree: usize,
    gens: Vec<Permutation>,
    abelian: OnceLock<bool>,
}

impl GeneratorSet {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DomainMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(GeneratorSet {
            degree,
            gens,
            abelian: OnceLock::new(),
        })
    }

    pub fn empty(degree: usize) -> Self {
        GeneratorSet {
            degree,
            gens: Vec::new(),
            abelian: OnceLock::new(),
        }
    }

    /// Generators given as raw image tables.
    pub fn from_images(degree: usize, gens: &[&[usize]]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| Permutation::from_images(g.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Whether all generators commute pairwise. Cached after the first call.
    pub fn is_abelian(&self) -> bool {
        *self.abelian.get_or_init(|| {
            let g = &self.gens;
            (0..g.len()).all(|a| (a + 1..g.len()).all(|b| g[a].commutes_with(&g[b])))
        })
    }

    /// Records that the generators are known to commute, e.g. because they
    /// are images of commuting generators under a morphism.
    pub(crate) fn assume_abelian(self) -> Self {
        let _ = self.abelian.set(true);
        self
    }

    pub(crate) fn abelian_known(&self) -> bool {
        self.abelian.get() == Some(&true)
    }

    pub fn with(mut self, g: Permutation) -> Result<Self> {
        if g.degree() != self.degree {
            return Err(Error::DomainMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        self.gens.push(g);
        self.abelian = OnceLock::new();
        Ok(self)
    }

    pub fn order(&self) -> BigCard {
        StabilizerChain::build(self).order()
    }
}

/// Concatenates generating sets over a common domain. The span of the result
/// is the group generated by the union of the parts.
pub fn union_span(degree: usize, parts: &[GeneratorSet]) -> Result<GeneratorSet> {
    let mut gens = Vec::new();
    for part in parts {
        if part.degree() != degree {
            return Err(Error::DomainMismatch {
                expected: degree,
                found: part.degree(),
            });
        }
        gens.extend(part.gens().iter().cloned());
    }
    GeneratorSet::new(degree, gens)
}

/// Every element of the group generated by `s`, by breadth-first closure.
/// Fails once more than `cap` elements have been found.
pub fn closure_bruteforce(s: &GeneratorSet, cap: usize) -> Result<HashSet<Permutation>> {
    let id = Permutation::identity(s.degree());
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in s.gens() {
            let y = g.compose_unchecked(&x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Membership decided by comparing `|<S>|` with `|<S, sigma>|`.
pub fn membership_by_order(s: &GeneratorSet, sigma: &Permutation) -> Result<bool> {
    if sigma.degree() != s.degree() {
        return Err(Error::DomainMismatch {
            expected: s.degree(),
            found: sigma.degree(),
        });
    }
    let extended = s.clone().with(sigma.clone())?;
    Ok(s.order() == extended.order())
}

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug)]
enum Letter {
    Fwd(u32),
    Inv(u32),
}

/// An element being sifted: its images on the probe points, plus the word of
/// strong generators that has been multiplied onto it from the left. The word
/// is kept only for elements that may lie outside the group.
struct Sifted {
    images: Vec<u32>,
    word: Vec<Letter>,
    track: bool,
}

/// Spanning forest of the orbits of the input generators.
#[derive(Clone, Debug)]
struct OrbitForest {
    gens: Vec<Permutation>,
    /// `(x, parent, t)` with `x = gens[t](parent)`, parents listed first.
    edges: Vec<(u32, u32, u32)>,
}

impl OrbitForest {
    /// Roots of the nontrivial orbits, and the forest hanging off them.
    fn new(degree: usize, gens: &[Permutation]) -> (Vec<u32>, OrbitForest) {
        let mut seen = vec![false; degree];
        let mut roots = Vec::new();
        let mut edges = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let before = edges.len();
            queue.push_back(start as u32);
            while let Some(x) = queue.pop_front() {
                for (t, g) in gens.iter().enumerate() {
                    let y = g.images()[x as usize];
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        edges.push((y, x, t as u32));
                        queue.push_back(y);
                    }
                }
            }
            if edges.len() > before {
                roots.push(start as u32);
            }
        }
        let forest = OrbitForest {
            gens: gens.to_vec(),
            edges,
        };
        (roots, forest)
    }

    /// The unique group element with the given root images.
    fn rebuild(&self, roots: &[u32], images_on_roots: &[u32], degree: usize) -> Vec<u32> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (&r, &y) in roots.iter().zip(images_on_roots) {
            images[r as usize] = y;
        }
        for &(x, parent, t) in &self.edges {
            images[x as usize] = self.gens[t as usize].images()[images[parent as usize] as usize];
        }
        images
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Indices into `strong` of the generators fixing all earlier base points.
    gens: Vec<u32>,
    orbit: Vec<u32>,
    /// Schreier tree: `via[x] = t` means `x = strong[t](parent)`.
    via: Vec<u32>,
    /// Per orbit position, how many of `gens` have been paired with it.
    tested: Vec<u32>,
}

/// A base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Permutation>,
    strong_inv: Vec<Permutation>,
    levels: Vec<Level>,
    probe: Vec<u32>,
    probe_pos: Vec<u32>,
    full_probe: bool,
    forest: Option<OrbitForest>,
}

impl StabilizerChain {
    pub fn build(s: &GeneratorSet) -> StabilizerChain {
        let degree = s.degree();
        let abelian = s.abelian_known() || s.is_abelian();
        let (probe, forest) = if abelian {
            let (roots, forest) = OrbitForest::new(degree, s.gens());
            (roots, Some(forest))
        } else {
            ((0..degree as u32).collect(), None)
        };
        let mut probe_pos = vec![NONE; degree];
        for (k, &x) in probe.iter().enumerate() {
            probe_pos[x as usize] = k as u32;
        }
        let mut chain = StabilizerChain {
            degree,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            full_probe: forest.is_none(),
            probe,
            probe_pos,
            forest,
        };
        for g in s.gens() {
            chain.add_input(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base as usize).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Fundamental orbit of the given level, in discovery order.
    pub fn orbit(&self, level: usize) -> Vec<usize> {
        self.levels[level].orbit.iter().map(|&x| x as usize).collect()
    }

    /// Coset representative of `level` mapping its base point to `point`.
    pub fn transversal(&self, level: usize, point: usize) -> Option<Permutation> {
        let lv = self.levels.get(level)?;
        if lv.via[point] == NONE {
            return None;
        }
        let mut u = Permutation::identity(self.degree);
        for t in self.path(lv, point as u32).into_iter().rev() {
            u = self.strong[t as usize].compose_unchecked(&u);
        }
        Some(u)
    }

    /// Group order as the product of the fundamental orbit lengths.
    pub fn order(&self) -> BigCard {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, sigma: &Permutation) -> Result<bool> {
        if sigma.degree() != self.degree {
            return Err(Error::DomainMismatch {
                expected: self.degree,
                found: sigma.degree(),
            });
        }
        if self.full_probe {
            let (residue, stop) = self.strip(sigma);
            return Ok(stop == self.levels.len() && residue.is_identity());
        }
        let mut e = self.seed(sigma, false);
        if self.sift(&mut e, 0, self.levels.len()) < self.levels.len() || !self.trivial_on_probe(&e) {
            return Ok(false);
        }
        // some member agrees with sigma on the roots; it is the rebuilt one
        let on_roots: Vec<u32> = self.probe.iter().map(|&x| sigma.images()[x as usize]).collect();
        let forest = self.forest.as_ref().expect("abelian chains carry a forest");
        Ok(forest.rebuild(&self.probe, &on_roots, self.degree) == sigma.images())
    }

    /// Sifts `sigma` through the levels whose base point lies below `limit`,
    /// returning the full residue and the level where sifting stopped.
    pub(crate) fn strip_below(&self, sigma: &Permutation, limit: usize) -> (Permutation, usize) {
        let depth = self
            .levels
            .iter()
            .position(|l| l.base as usize >= limit)
            .unwrap_or(self.levels.len());
        let mut e = self.seed(sigma, true);
        let stop = self.sift(&mut e, 0, depth);
        (self.materialize(&e, sigma), stop)
    }

    pub(crate) fn strip(&self, sigma: &Permutation) -> (Permutation, usize) {
        self.strip_below(sigma, usize::MAX)
    }

    pub(crate) fn base_points_below(&self, limit: usize) -> bool {
        self.levels.iter().all(|l| (l.base as usize) < limit)
    }

    fn seed(&self, g: &Permutation, track: bool) -> Sifted {
        Sifted {
            images: self.probe.iter().map(|&x| g.images()[x as usize]).collect(),
            word: Vec::new(),
            track,
        }
    }

    fn path(&self, level: &Level, mut x: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while x != level.base {
            let t = level.via[x as usize];
            out.push(t);
            x = self.strong_inv[t as usize].images()[x as usize];
        }
        out
    }

    fn left_mul(&self, e: &mut Sifted, letter: Letter) {
        let table = match letter {
            Letter::Fwd(t) => self.strong[t as usize].images(),
            Letter::Inv(t) => self.strong_inv[t as usize].images(),
        };
        for y in e.images.iter_mut() {
            *y = table[*y as usize];
        }
        if e.track {
            e.word.push(letter);
        }
    }

    /// Sifts through levels `from..to`; returns the level where the image of
    /// the base point left the fundamental orbit, or `to`.
    fn sift(&self, e: &mut Sifted, from: usize, to: usize) -> usize {
        for l in from..to {
            let lv = &self.levels[l];
            let k = self.probe_pos[lv.base as usize] as usize;
            let mut x = e.images[k];
            if lv.via[x as usize] == NONE {
                return l;
            }
            while x != lv.base {
                let t = lv.via[x as usize];
                self.left_mul(e, Letter::Inv(t));
                x = e.images[k];
            }
        }
        to
    }

    fn trivial_on_probe(&self, e: &Sifted) -> bool {
        e.images.iter().zip(&self.probe).all(|(a, b)| a == b)
    }

    /// Full images of a sifted element. Untracked elements must lie in the
    /// group.
    fn materialize(&self, e: &Sifted, seed: &Permutation) -> Permutation {
        if self.full_probe {
            return Permutation::from_raw(e.images.clone());
        }
        if !e.track {
            let forest = self.forest.as_ref().expect("abelian chains carry a forest");
            return Permutation::from_raw(forest.rebuild(&self.probe, &e.images, self.degree));
        }
        let mut images = seed.images().to_vec();
        for &letter in &e.word {
            let table = match letter {
                Letter::Fwd(t) => self.strong[t as usize].images(),
                Letter::Inv(t) => self.strong_inv[t as usize].images(),
            };
            for y in images.iter_mut() {
                *y = table[*y as usize];
            }
        }
        Permutation::from_raw(images)
    }

    fn add_input(&mut self, g: &Permutation) {
        let mut e = self.seed(g, false);
        let stop = self.sift(&mut e, 0, self.levels.len());
        if stop == self.levels.len() && self.trivial_on_probe(&e) {
            return;
        }
        let h = self.materialize(&e, g);
        self.insert_strong(h, 0, stop);
        self.complete(stop);
    }

    /// Adds `h` to the generator lists of levels `from..=to`, opening a new
    /// level when `to` is one past the current depth.
    fn insert_strong(&mut self, h: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let k = h
                .images()
                .iter()
                .zip(0u32..)
                .position(|(&y, x)| y != x && self.probe_pos[x as usize] != NONE);
            let base = k.expect("nontrivial residue moves a probe point") as u32;
            let mut via = vec![NONE; self.degree];
            via[base as usize] = ROOT;
            self.levels.push(Level {
                base,
                gens: Vec::new(),
                orbit: vec![base],
                via,
                tested: vec![0],
            });
        }
        let t = self.strong.len() as u32;
        self.strong_inv.push(h.inverse());
        self.strong.push(h);
        for l in from..=to {
            self.levels[l].gens.push(t);
            self.extend_orbit(l, t);
        }
    }

    fn extend_orbit(&mut self, l: usize, t: u32) {
        let strong = &self.strong;
        let lv = &mut self.levels[l];
        let g = strong[t as usize].images();
        let mut fresh = VecDeque::new();
        for i in 0..lv.orbit.len() {
            let y = g[lv.orbit[i] as usize];
            if lv.via[y as usize] == NONE {
                lv.via[y as usize] = t;
                lv.orbit.push(y);
                lv.tested.push(0);
                fresh.push_back(y);
            }
        }
        while let Some(x) = fresh.pop_front() {
            for &s in &lv.gens {
                let y = strong[s as usize].images()[x as usize];
                if lv.via[y as usize] == NONE {
                    lv.via[y as usize] = s;
                    lv.orbit.push(y);
                    lv.tested.push(0);
                    fresh.push_back(y);
                }
            }
        }
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let l = i as usize;
            match self.next_residue(l) {
                Some((h, j)) => {
                    self.insert_strong(h, l + 1, j);
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    /// Sifts untested Schreier generators of level `l` until one leaves a
    /// nontrivial residue.
    fn next_residue(&mut self, l: usize) -> Option<(Permutation, usize)> {
        let mut p = 0;
        while p < self.levels[l].orbit.len() {
            let ngens = self.levels[l].gens.len() as u32;
            if self.levels[l].tested[p] >= ngens {
                p += 1;
                continue;
            }
            let x = self.levels[l].orbit[p];
            let mut ux = Sifted {
                images: self.probe.clone(),
                word: Vec::new(),
                track: false,
            };
            for t in self.path(&self.levels[l], x).into_iter().rev() {
                self.left_mul(&mut ux, Letter::Fwd(t));
            }
            while self.levels[l].tested[p] < ngens {
                let k = self.levels[l].tested[p] as usize;
                self.levels[l].tested[p] += 1;
                let t = self.levels[l].gens[k];
                let mut e = Sifted {
                    images: ux.images.clone(),
                    word: Vec::new(),
                    track: false,
                };
                self.left_mul(&mut e, Letter::Fwd(t));
                let stop = self.sift(&mut e, l, self.levels.len());
                if stop < self.levels.len() || !self.trivial_on_probe(&e) {
                    let id = Permutation::identity(self.degree);
                    return Some((self.materialize(&e, &id), stop));
                }
            }
            p += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transpositions(n: usize) -> GeneratorSet {
        let mut gens = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                gens.push(Permutation::from_cycles(n, &[&[a, b]]).unwrap());
            }
        }
        GeneratorSet::new(n, gens).unwrap()
    }

    fn factorial(n: u32) -> BigCard {
        (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k))
    }

    #[test]
    fn trivial_and_empty() {
        let c = StabilizerChain::build(&GeneratorSet::empty(5));
        assert_eq!(c.order(), BigUint::one());
        assert!(c.contains(&Permutation::identity(5)).unwrap());
        let c0 = StabilizerChain::build(&GeneratorSet::empty(0));
        assert_eq!(c0.order(), BigUint::one());
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 1..=8 {
            assert_eq!(transpositions(n).order(), factorial(n as u32), "n = {n}");
        }
    }

    #[test]
    fn cyclic_and_s3() {
        let c4 = GeneratorSet::from_images(4, &[&[1, 2, 3, 0]]).unwrap();
        assert_eq!(c4.order(), BigUint::from(4u32));
        let s3 = GeneratorSet::from_images(3, &[&[1, 0, 2], &[0, 2, 1]]).unwrap();
        assert_eq!(s3.order(), BigUint::from(6u32));
    }

    #[test]
    fn membership_examples() {
        let rot = GeneratorSet::from_images(3, &[&[1, 2, 0]]).unwrap();
        let chain = StabilizerChain::build(&rot);
        let swap = Permutation::from_images(vec![1, 0, 2]).unwrap();
        assert!(!chain.contains(&swap).unwrap());
        assert!(!membership_by_order(&rot, &swap).unwrap());
        assert!(chain.contains(&rot.gens()[0]).unwrap());
        assert!(membership_by_order(&rot, &Permutation::identity(3)).unwrap());
        assert!(chain.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn abelian_probe_rejects_non_members_that_agree_on_representatives() {
        // <(0 1 2 3)> on 4 points plus a fixed block; the probe is {0, 4, 5}.
        let g = GeneratorSet::from_images(6, &[&[1, 2, 3, 0, 4, 5]]).unwrap();
        assert!(g.is_abelian());
        let chain = StabilizerChain::build(&g);
        assert_eq!(chain.order(), BigUint::from(4u32));
        // fixes 0 (the only tracked point of the orbit) but is not a member
        let odd = Permutation::from_images(vec![0, 3, 2, 1, 4, 5]).unwrap();
        assert!(!chain.contains(&odd).unwrap());
        let outside = Permutation::from_images(vec![0, 1, 2, 3, 5, 4]).unwrap();
        assert!(!chain.contains(&outside).unwrap());
    }

    #[test]
    fn union_span_examples() {
        let a = GeneratorSet::from_images(3, &[&[1, 0, 2]]).unwrap();
        let b = GeneratorSet::from_images(3, &[&[0, 2, 1]]).unwrap();
        let u = union_span(3, &[a.clone(), b]).unwrap();
        assert_eq!(u.order(), BigUint::from(6u32));
        let with_empty = union_span(3, &[a.clone(), GeneratorSet::empty(3)]).unwrap();
        assert_eq!(with_empty.order(), a.order());
        let doubled = union_span(3, &[a.clone(), a.clone()]).unwrap();
        assert_eq!(doubled.order(), a.order());
        assert!(union_span(3, &[GeneratorSet::empty(4)]).is_err());
    }

    #[test]
    fn closure_examples() {
        let e = closure_bruteforce(&GeneratorSet::empty(3), 10).unwrap();
        assert_eq!(e.len(), 1);
        let rot = GeneratorSet::from_images(3, &[&[1, 2, 0]]).unwrap();
        assert_eq!(closure_bruteforce(&rot, 10).unwrap().len(), 3);
        assert_eq!(closure_bruteforce(&transpositions(4), 100).unwrap().len(), 24);
        assert!(matches!(
            closure_bruteforce(&transpositions(4), 10),
            Err(Error::CapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn chain_structure_is_consistent() {
        let g = GeneratorSet::from_images(
            7,
            &[&[1, 2, 3, 4, 5, 6, 0], &[0, 3, 6, 2, 5, 1, 4]],
        )
        .unwrap();
        let chain = StabilizerChain::build(&g);
        assert_eq!(chain.order(), BigUint::from(42u32));
        for s in chain.strong_generators() {
            assert!(chain.contains(s).unwrap());
        }
        for (l, &b) in chain.base().iter().enumerate() {
            for x in chain.orbit(l) {
                let u = chain.transversal(l, x).unwrap();
                assert_eq!(u.apply(b), x);
                assert!(chain.contains(&u).unwrap());
            }
        }
    }
}
