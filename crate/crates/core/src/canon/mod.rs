//! Canonization of graphs whose vertex classes carry abelian, transitive
//! permutation groups given by an explicit enumeration.
//!
//! Each class `A_i` comes with `Γ_i = [γ_0, ..., γ_{s-1}]`, `s = |A_i|`. Since
//! `Γ_i` is abelian and transitive it acts regularly, so any anchor `a`
//! induces the labeling `map_a(γ_μ(a)) = μ` of the class. Canonization picks
//! anchors greedily, block by block, keeping the set of still-optimal anchor
//! tuples as a coset named by a morphism value, and never making an arbitrary
//! choice between equally good anchors.

mod algorithm;
pub mod ambient;
mod labeling;
mod oracle;
mod refine;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use algorithm::{canonize, canonize_with, compatible_pairs, min_pairs, CanonState};
pub use ambient::{
    group_g_generators, m_init_eval, omega, phi_of_anchors, slm_eval, theta_eval, v_init, v_ij, Layout,
    OmegaTable,
};
pub use labeling::{encode_relative, local_labeling, oplus, LocalLabeling, PartialLabeling};
pub use oracle::{canon_oracle, canon_oracle_with, witness};
pub use refine::refine_intra;

/// Anchor pairs or encoded edges.
pub type Pairs = Vec<(usize, usize)>;

/// Unvalidated colored graph: classes as point lists, directed edges, and
/// per-class enumerations as class-local image sequences (entry `k` of
/// `phi[i][j]` is the local index of `γ^i_j(classes[i][k])`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawColoredGraph {
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    pub phi: Vec<Vec<Vec<usize>>>,
}

/// A validated graph with abelian colors, plus the tables derived from it.
#[derive(Clone, Debug)]
pub struct AbelianColoredGraph {
    n: usize,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    local: Vec<usize>,
    edges: BTreeSet<(usize, usize)>,
    phi: Vec<Vec<Vec<usize>>>,
    offsets: Vec<usize>,
    // mul[i][j][k] = index of γ_j ∘ γ_k
    mul: Vec<Vec<Vec<usize>>>,
    // label[i][a][b] = μ with γ_μ(a) = b, all class-local
    label: Vec<Vec<Vec<usize>>>,
    identity: Vec<usize>,
}

/// Checks every clause of the abelian-colors definition and derives the
/// multiplication and labeling tables.
pub fn validate(raw: &RawColoredGraph) -> Result<AbelianColoredGraph> {
    let n = raw.n;
    let mut class_of = vec![usize::MAX; n];
    let mut local = vec![0; n];
    for (i, class) in raw.classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::BadPartition(format!("class {i} is empty")));
        }
        for (k, &p) in class.iter().enumerate() {
            if p >= n {
                return Err(Error::BadPartition(format!("point {p} of class {i} is out of range")));
            }
            if class_of[p] != usize::MAX {
                return Err(Error::BadPartition(format!("point {p} is listed twice")));
            }
            class_of[p] = i;
            local[p] = k;
        }
    }
    if let Some(p) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::BadPartition(format!("point {p} is in no class")));
    }
    if raw.phi.len() != raw.classes.len() {
        return Err(Error::BadPartition(format!(
            "{} classes but {} enumerations",
            raw.classes.len(),
            raw.phi.len()
        )));
    }

    let mut mul = Vec::new();
    let mut label = Vec::new();
    let mut identity = Vec::new();
    for (i, (class, gammas)) in raw.classes.iter().zip(&raw.phi).enumerate() {
        let (m, l, id) = class_tables(i, class.len(), gammas)?;
        mul.push(m);
        label.push(l);
        identity.push(id);
    }

    let mut edges = BTreeSet::new();
    for &(u, v) in &raw.edges {
        if u >= n || v >= n {
            return Err(Error::EdgeOutOfRange(u, v));
        }
        edges.insert((u, v));
    }

    let mut offsets = Vec::with_capacity(raw.classes.len());
    let mut acc = 0;
    for class in &raw.classes {
        offsets.push(acc);
        acc += class.len();
    }

    Ok(AbelianColoredGraph {
        n,
        classes: raw.classes.clone(),
        class_of,
        local,
        edges,
        phi: raw.phi.clone(),
        offsets,
        mul,
        label,
        identity,
    })
}

type ClassTables = (Vec<Vec<usize>>, Vec<Vec<usize>>, usize);

fn class_tables(class: usize, s: usize, gammas: &[Vec<usize>]) -> Result<ClassTables> {
    if gammas.len() != s {
        return Err(Error::WrongEnumerationLength {
            class,
            expected: s,
            found: gammas.len(),
        });
    }
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    for (j, g) in gammas.iter().enumerate() {
        if g.len() != s || !is_bijection(g) {
            return Err(Error::NotAGroup { class });
        }
        index.entry(g.as_slice()).or_insert(j);
    }
    if index.len() != s {
        return Err(Error::WrongEnumerationLength {
            class,
            expected: s,
            found: index.len(),
        });
    }
    // a finite set of permutations closed under composition is a group
    let mut mul = vec![vec![0; s]; s];
    for j in 0..s {
        for k in 0..s {
            let prod: Vec<usize> = (0..s).map(|x| gammas[j][gammas[k][x]]).collect();
            mul[j][k] = *index.get(prod.as_slice()).ok_or(Error::NotAGroup { class })?;
        }
    }
    for j in 0..s {
        for k in 0..j {
            if mul[j][k] != mul[k][j] {
                return Err(Error::NotAbelian { class });
            }
        }
    }
    let mut hit = vec![false; s];
    for g in gammas {
        hit[g[0]] = true;
    }
    if hit.iter().any(|&h| !h) {
        return Err(Error::NotTransitive { class });
    }
    let identity = (0..s)
        .find(|&j| gammas[j].iter().enumerate().all(|(x, &y)| x == y))
        .ok_or(Error::NotAGroup { class })?;
    let mut label = vec![vec![usize::MAX; s]; s];
    for a in 0..s {
        for (mu, g) in gammas.iter().enumerate() {
            if label[a][g[a]] != usize::MAX {
                return Err(Error::Invariant(format!("class {class}: action is not regular")));
            }
            label[a][g[a]] = mu;
        }
    }
    Ok((mul, label, identity))
}

fn is_bijection(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
}

impl AbelianColoredGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn class_of(&self, p: usize) -> usize {
        self.class_of[p]
    }

    /// Position of `p` in its class listing.
    pub fn local_index(&self, p: usize) -> usize {
        self.local[p]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn phi(&self, i: usize) -> &[Vec<usize>] {
        &self.phi[i]
    }

    /// `γ^i_j` applied to the global point `p` of class `i`.
    pub fn gamma(&self, i: usize, j: usize, p: usize) -> usize {
        self.classes[i][self.phi[i][j][self.local[p]]]
    }

    /// Enumeration index of `γ_j ∘ γ_k` in class `i`.
    pub fn mul(&self, i: usize, j: usize, k: usize) -> usize {
        self.mul[i][j][k]
    }

    /// Class-local `μ` with `γ^i_μ(a) = b`, for local indices `a`, `b`.
    pub fn label(&self, i: usize, a: usize, b: usize) -> usize {
        self.label[i][a][b]
    }

    pub fn identity_index(&self, i: usize) -> usize {
        self.identity[i]
    }

    /// Edges with source in class `i` and target in class `j`.
    pub fn edges_between(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| self.class_of[u] == i && self.class_of[v] == j)
            .collect()
    }

    /// The undirected block `E_{i,j}`: edges running between the two classes
    /// in either direction. For `i = j` this is the intra-class edge set.
    pub fn block_edges(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| {
                let (cu, cv) = (self.class_of[u], self.class_of[v]);
                (cu == i && cv == j) || (cu == j && cv == i)
            })
            .collect()
    }

    pub fn to_raw(&self) -> RawColoredGraph {
        RawColoredGraph {
            n: self.n,
            classes: self.classes.clone(),
            edges: self.edges.iter().copied().collect(),
            phi: self.phi.clone(),
        }
    }
}

/// Order on block encodings. Encodings are sorted lists of numeric pairs;
/// the characteristic bit-vector runs over positions in increasing pair order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// A set bit sorts before a clear one, so edges packed early win.
    #[default]
    EdgesFirst,
    /// The opposite bit order. Consistent, but a different canonical form;
    /// used as a negative control.
    Reversed,
}

impl Convention {
    pub fn compare(self, a: &[(usize, usize)], b: &[(usize, usize)]) -> Ordering {
        let edges_first = match a.iter().zip(b).find(|(x, y)| x != y) {
            Some((x, y)) => x.cmp(y),
            // a proper prefix lacks the later edges, so it is larger
            None => b.len().cmp(&a.len()),
        };
        match self {
            Convention::EdgesFirst => edges_first,
            Convention::Reversed => edges_first.reverse(),
        }
    }

    /// Compares tuples of blocks lexicographically.
    pub fn compare_blocks(self, a: &[Vec<(usize, usize)>], b: &[Vec<(usize, usize)>]) -> Ordering {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.compare(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Numeric copy of a graph with abelian colors: classes become consecutive
/// blocks of sizes `class_sizes`, edges are sorted, and `phi[i][j]` lists the
/// block-local images of the canonical `γ^i_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub class_sizes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub phi: Vec<Vec<Vec<usize>>>,
}

impl CanonicalForm {
    /// Compact JSON followed by a newline. Field order and edge order are
    /// fixed, so equal forms give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// The two reference graphs: a directed 4-cycle with `Z_4`, and two `Z_2`
/// classes joined by one undirected edge.
pub mod fixtures {
    use super::*;

    pub fn c4_raw() -> RawColoredGraph {
        RawColoredGraph {
            n: 4,
            classes: vec![vec![0, 1, 2, 3]],
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            phi: vec![(0..4).map(|j| (0..4).map(|x| (x + j) % 4).collect()).collect()],
        }
    }

    pub fn c4() -> AbelianColoredGraph {
        validate(&c4_raw()).unwrap()
    }

    pub fn b_raw() -> RawColoredGraph {
        RawColoredGraph {
            n: 4,
            classes: vec![vec![0, 1], vec![2, 3]],
            edges: vec![(0, 2), (2, 0)],
            phi: vec![vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]],
        }
    }

    pub fn b() -> AbelianColoredGraph {
        validate(&b_raw()).unwrap()
    }
}
