//! The ambient group `𝒢`, the init morphism and the block morphisms `ϑ_{i,j}`.
//!
//! `𝒢` acts on the tagged domain `⊔_i A_i × A_i`: an element `λ` is a family
//! of permutations `λ_b ∈ Γ_i`, one per point `b`, with `λ_b` acting on layer
//! `b`. The labeling coset of anchors `(a_i)` is represented by
//! `φ(σ)_b = map_b^-1 ∘ map_{a_i}`. Cross-class layers `A_i × A_j` would only
//! ever carry identities, so they are not materialized.
//!
//! Both morphisms have a full codomain (`A×A×A`, `A×A×Ω`) used by the public
//! evaluators, and a pruned one that drops components that are the identity
//! for every element of `𝒢`. The canonizer uses the pruned form.

use std::sync::Arc;

use super::AbelianColoredGraph;
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Full,
    Pruned,
}

impl AbelianColoredGraph {
    fn layer_base(&self, i: usize) -> usize {
        (0..i).map(|k| self.class_size(k).pow(2)).sum()
    }

    /// Size of the tagged domain of `𝒢`.
    pub fn ambient_degree(&self) -> usize {
        (0..self.num_classes()).map(|k| self.class_size(k).pow(2)).sum()
    }

    /// Class-local permutations `λ_b` for every point of class `i`, read off
    /// the layers of `λ`.
    fn layers(&self, lambda: &Permutation, i: usize) -> Result<Vec<Vec<usize>>> {
        let s = self.class_size(i);
        let base = self.layer_base(i);
        (0..s)
            .map(|b| {
                let start = base + b * s;
                (0..s)
                    .map(|x| {
                        let y = lambda.apply(start + x);
                        if y < start || y >= start + s {
                            Err(Error::NotBlockDiagonal)
                        } else {
                            Ok(y - start)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Enumeration index of a class-local permutation known to lie in `Γ_i`.
    fn index_of(&self, i: usize, perm: &[usize]) -> Result<usize> {
        let mu = self.label(i, 0, perm[0]);
        if self.phi(i)[mu] != perm {
            return Err(Error::EvaluationOutsideSource);
        }
        Ok(mu)
    }
}

/// Generator `(i, a)` acts on layer `b` of class `i` as `map_b^-1 ∘ map_a`
/// and fixes everything else. Generators are listed by class, then by
/// position in the class.
pub fn group_g_generators(g: &AbelianColoredGraph) -> GeneratorSet {
    let deg = g.ambient_degree();
    let mut gens = Vec::new();
    for i in 0..g.num_classes() {
        let s = g.class_size(i);
        let base = g.layer_base(i);
        for a in 0..s {
            let mut images: Vec<u32> = (0..deg as u32).collect();
            for b in 0..s {
                for x in 0..s {
                    let y = g.phi(i)[g.label(i, a, x)][b];
                    images[base + b * s + x] = (base + b * s + y) as u32;
                }
            }
            gens.push(Permutation::from_raw(images));
        }
    }
    GeneratorSet::new(deg, gens)
        .expect("degrees agree")
        .assume_abelian()
}

/// `φ(⊕_i map_{a_i})` for an anchor tuple (global points, one per class).
/// On block `i` this coincides with generator `(i, a_i)`.
pub fn phi_of_anchors(g: &AbelianColoredGraph, anchors: &[usize]) -> Result<Permutation> {
    if anchors.len() != g.num_classes() {
        return Err(Error::LengthMismatch {
            expected: g.num_classes(),
            found: anchors.len(),
        });
    }
    let mut images: Vec<u32> = (0..g.ambient_degree() as u32).collect();
    for (i, &a) in anchors.iter().enumerate() {
        if a >= g.n() || g.class_of(a) != i {
            return Err(Error::WrongClass { point: a, class: i });
        }
        let a = g.local_index(a);
        let s = g.class_size(i);
        let base = g.layer_base(i);
        for b in 0..s {
            for x in 0..s {
                let y = g.phi(i)[g.label(i, a, x)][b];
                images[base + b * s + x] = (base + b * s + y) as u32;
            }
        }
    }
    Ok(Permutation::from_raw(images))
}

/// `m_init(λ)_{a,b} = λ_a λ_b^-1` for `a, b` in a common class.
#[derive(Debug)]
pub struct InitMorphism {
    graph: Arc<AbelianColoredGraph>,
    layout: Layout,
}

impl InitMorphism {
    pub fn new(graph: Arc<AbelianColoredGraph>, layout: Layout) -> Self {
        InitMorphism { graph, layout }
    }

    pub fn source_degree(&self) -> usize {
        self.graph.ambient_degree()
    }

    pub fn codomain_degree(&self) -> usize {
        let g = &self.graph;
        match self.layout {
            Layout::Full => g.n().pow(3),
            Layout::Pruned => (0..g.num_classes())
                .map(|i| {
                    let s = g.class_size(i);
                    s * s * (s - 1)
                })
                .sum(),
        }
    }

    /// Assembles a codomain permutation from the components `f(i, a, b)`,
    /// each a class-local permutation.
    fn assemble(&self, f: impl Fn(usize, usize, usize) -> Vec<usize>) -> Permutation {
        let g = &self.graph;
        let mut images: Vec<u32> = (0..self.codomain_degree() as u32).collect();
        let mut start = 0;
        for i in 0..g.num_classes() {
            let s = g.class_size(i);
            let class = g.class(i);
            for a in 0..s {
                for b in 0..s {
                    if a == b {
                        continue;
                    }
                    let comp = f(i, a, b);
                    match self.layout {
                        Layout::Pruned => {
                            for c in 0..s {
                                images[start + c] = (start + comp[c]) as u32;
                            }
                            start += s;
                        }
                        Layout::Full => {
                            let n = g.n();
                            let block = (class[a] * n + class[b]) * n;
                            for c in 0..s {
                                images[block + class[c]] = (block + class[comp[c]]) as u32;
                            }
                        }
                    }
                }
            }
        }
        Permutation::from_raw(images)
    }

    pub fn evaluate(&self, lambda: &Permutation) -> Result<Permutation> {
        let g = &self.graph;
        let layers = (0..g.num_classes())
            .map(|i| g.layers(lambda, i))
            .collect::<Result<Vec<_>>>()?;
        let inverses: Vec<Vec<Vec<usize>>> = layers
            .iter()
            .map(|ls| {
                ls.iter()
                    .map(|l| {
                        let mut inv = vec![0; l.len()];
                        for (x, &y) in l.iter().enumerate() {
                            inv[y] = x;
                        }
                        inv
                    })
                    .collect()
            })
            .collect();
        Ok(self.assemble(|i, a, b| {
            let (la, lb_inv) = (&layers[i][a], &inverses[i][b]);
            lb_inv.iter().map(|&y| la[y]).collect()
        }))
    }

    /// `(v_init)_{a,b} = map_a^-1 ∘ map_b`, i.e. `c ↦ γ_{map_b(c)}(a)`.
    pub fn value(&self) -> Permutation {
        let g = &self.graph;
        self.assemble(|i, a, b| {
            (0..g.class_size(i))
                .map(|c| g.phi(i)[g.label(i, b, c)][a])
                .collect()
        })
    }
}

pub fn m_init_eval(g: &AbelianColoredGraph, lambda: &Permutation) -> Result<Permutation> {
    if lambda.degree() != g.ambient_degree() {
        return Err(Error::DomainMismatch {
            expected: g.ambient_degree(),
            found: lambda.degree(),
        });
    }
    InitMorphism::new(Arc::new(g.clone()), Layout::Full).evaluate(lambda)
}

pub fn v_init(g: &AbelianColoredGraph) -> Permutation {
    InitMorphism::new(Arc::new(g.clone()), Layout::Full).value()
}

/// Coset representatives of `Δ_{i,j} = Γ_iΓ_j ∩ Aut(E_{i,j})` in `Γ_iΓ_j`,
/// each the lexicographically smallest index pair of its coset.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    pub i: usize,
    pub j: usize,
    pub reps: Vec<(usize, usize)>,
    pub delta: Vec<(usize, usize)>,
    si: usize,
    sj: usize,
    // representative position of the coset of (α, β), at α * sj + β
    coset_of: Vec<usize>,
}

impl OmegaTable {
    pub fn new(g: &AbelianColoredGraph, i: usize, j: usize) -> Self {
        let (si, sj) = (g.class_size(i), g.class_size(j));
        let block = g.block_edges(i, j);
        let edge_set: std::collections::HashSet<(usize, usize)> = block.iter().copied().collect();
        let act = |alpha: usize, beta: usize, p: usize| {
            if g.class_of(p) == i {
                g.gamma(i, alpha, p)
            } else {
                g.gamma(j, beta, p)
            }
        };
        let mut delta = Vec::new();
        for alpha in 0..si {
            for beta in 0..sj {
                if block
                    .iter()
                    .all(|&(u, v)| edge_set.contains(&(act(alpha, beta, u), act(alpha, beta, v))))
                {
                    delta.push((alpha, beta));
                }
            }
        }
        let mut coset_of = vec![usize::MAX; si * sj];
        let mut reps = Vec::new();
        for alpha in 0..si {
            for beta in 0..sj {
                if coset_of[alpha * sj + beta] != usize::MAX {
                    continue;
                }
                let k = reps.len();
                reps.push((alpha, beta));
                for &(da, db) in &delta {
                    coset_of[g.mul(i, alpha, da) * sj + g.mul(j, beta, db)] = k;
                }
            }
        }
        OmegaTable {
            i,
            j,
            reps,
            delta,
            si,
            sj,
            coset_of,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Images of the left action of `(γ^i_α, γ^j_β)` on the representatives.
    pub(crate) fn slm_images(&self, g: &AbelianColoredGraph, alpha: usize, beta: usize) -> Vec<usize> {
        self.reps
            .iter()
            .map(|&(a2, b2)| self.coset_of[g.mul(self.i, alpha, a2) * self.sj + g.mul(self.j, beta, b2)])
            .collect()
    }

    fn check(&self, alpha: usize, beta: usize) -> Result<()> {
        if alpha >= self.si {
            return Err(Error::IndexOutOfRange {
                index: alpha,
                limit: self.si,
            });
        }
        if beta >= self.sj {
            return Err(Error::IndexOutOfRange {
                index: beta,
                limit: self.sj,
            });
        }
        Ok(())
    }
}

pub fn omega(g: &AbelianColoredGraph, i: usize, j: usize) -> Vec<(usize, usize)> {
    OmegaTable::new(g, i, j).reps
}

pub fn slm_eval(g: &AbelianColoredGraph, i: usize, j: usize, gamma: (usize, usize)) -> Result<Permutation> {
    let table = OmegaTable::new(g, i, j);
    table.check(gamma.0, gamma.1)?;
    Permutation::from_images(table.slm_images(g, gamma.0, gamma.1))
}

/// `ϑ_{i,j}(λ)_{a,b} = slm(λ_a, λ_b)` for `(a, b) ∈ A_i × A_j`.
#[derive(Debug)]
pub struct ThetaMorphism {
    graph: Arc<AbelianColoredGraph>,
    omega: OmegaTable,
    layout: Layout,
}

impl ThetaMorphism {
    pub fn new(graph: Arc<AbelianColoredGraph>, i: usize, j: usize, layout: Layout) -> Self {
        let omega = OmegaTable::new(&graph, i, j);
        ThetaMorphism { graph, omega, layout }
    }

    pub fn omega(&self) -> &OmegaTable {
        &self.omega
    }

    pub fn source_degree(&self) -> usize {
        self.graph.ambient_degree()
    }

    pub fn codomain_degree(&self) -> usize {
        let w = self.omega.len();
        match self.layout {
            Layout::Full => self.graph.n().pow(2) * w,
            Layout::Pruned => self.omega.si * self.omega.sj * w,
        }
    }

    /// Codomain permutation whose `(a, b)` component is `slm(f(a, b))`.
    fn assemble(&self, f: impl Fn(usize, usize) -> (usize, usize)) -> Permutation {
        let g = &self.graph;
        let w = self.omega.len();
        let (ci, cj) = (g.class(self.omega.i), g.class(self.omega.j));
        let mut images: Vec<u32> = (0..self.codomain_degree() as u32).collect();
        for a in 0..self.omega.si {
            for b in 0..self.omega.sj {
                let (alpha, beta) = f(a, b);
                let comp = self.omega.slm_images(g, alpha, beta);
                let start = match self.layout {
                    Layout::Pruned => (a * self.omega.sj + b) * w,
                    Layout::Full => (ci[a] * g.n() + cj[b]) * w,
                };
                for (k, &y) in comp.iter().enumerate() {
                    images[start + k] = (start + y) as u32;
                }
            }
        }
        Permutation::from_raw(images)
    }

    pub fn evaluate(&self, lambda: &Permutation) -> Result<Permutation> {
        let g = &self.graph;
        let (i, j) = (self.omega.i, self.omega.j);
        let alphas = g
            .layers(lambda, i)?
            .iter()
            .map(|l| g.index_of(i, l))
            .collect::<Result<Vec<_>>>()?;
        let betas = g
            .layers(lambda, j)?
            .iter()
            .map(|l| g.index_of(j, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.assemble(|a, b| (alphas[a], betas[b])))
    }

    /// `v_{i,j}(a_i, a_j)` for class-local anchors: component `(a, b)` is
    /// `slm((map_a ⊕ map_b)^-1 ∘ (map_{a_i} ⊕ map_{a_j}))`.
    pub fn value(&self, ai: usize, aj: usize) -> Permutation {
        let g = &self.graph;
        let (i, j) = (self.omega.i, self.omega.j);
        self.assemble(|a, b| (g.label(i, ai, a), g.label(j, aj, b)))
    }
}

fn check_pair(g: &AbelianColoredGraph, i: usize, j: usize) -> Result<()> {
    let m = g.num_classes();
    for k in [i, j] {
        if k >= m {
            return Err(Error::IndexOutOfRange { index: k, limit: m });
        }
    }
    if i == j {
        return Err(Error::Invariant("block morphisms need two distinct classes".into()));
    }
    Ok(())
}

pub fn theta_eval(g: &AbelianColoredGraph, i: usize, j: usize, lambda: &Permutation) -> Result<Permutation> {
    check_pair(g, i, j)?;
    if lambda.degree() != g.ambient_degree() {
        return Err(Error::DomainMismatch {
            expected: g.ambient_degree(),
            found: lambda.degree(),
        });
    }
    ThetaMorphism::new(Arc::new(g.clone()), i, j, Layout::Full).evaluate(lambda)
}

/// `v_{i,j}(a, b)` for global points `a ∈ A_i`, `b ∈ A_j`.
pub fn v_ij(g: &AbelianColoredGraph, i: usize, j: usize, a: usize, b: usize) -> Result<Permutation> {
    check_pair(g, i, j)?;
    if a >= g.n() || g.class_of(a) != i {
        return Err(Error::WrongClass { point: a, class: i });
    }
    if b >= g.n() || g.class_of(b) != j {
        return Err(Error::WrongClass { point: b, class: j });
    }
    let theta = ThetaMorphism::new(Arc::new(g.clone()), i, j, Layout::Full);
    Ok(theta.value(g.local_index(a), g.local_index(b)))
}
