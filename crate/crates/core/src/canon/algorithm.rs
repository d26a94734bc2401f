use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use super::ambient::{group_g_generators, InitMorphism, Layout, ThetaMorphism};
use super::refine::{intra_encoding, refine_with};
use super::{AbelianColoredGraph, CanonicalForm, Convention, Pairs};
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::morphism::{coset_intersect, image_chain, tensor, MorphismCoset, PermMorphism};
use crate::perm::Permutation;

/// One processed inter-class block.
#[derive(Clone, Debug)]
pub struct ProcessedBlock {
    pub i: usize,
    pub j: usize,
    /// Minimizing anchor pairs (global points).
    pub winners: Vec<(usize, usize)>,
    pub encoding: Vec<(usize, usize)>,
    /// The block constraint added to the coset, absent when `Ω` is a single
    /// coset and the constraint is vacuous.
    pub constraint: Option<(Arc<ThetaMorphism>, Permutation)>,
}

/// Running state of the greedy canonizer: the refined graph, the ambient
/// group and the coset of anchor tuples that are still optimal.
#[derive(Clone, Debug)]
pub struct CanonState {
    graph: Arc<AbelianColoredGraph>,
    convention: Convention,
    ambient: GeneratorSet,
    coset: MorphismCoset,
    blocks: Vec<ProcessedBlock>,
}

impl CanonState {
    /// Starts from the full labeling coset; `g` should already be refined.
    pub fn new(g: AbelianColoredGraph, convention: Convention) -> Result<Self> {
        let graph = Arc::new(g);
        let ambient = group_g_generators(&graph);
        let init = InitMorphism::new(graph.clone(), Layout::Pruned);
        let value = init.value();
        let coset = MorphismCoset::new(
            ambient.clone(),
            tensor(&[PermMorphism::Init(Arc::new(init))])?,
            value,
        )?;
        Ok(CanonState {
            graph,
            convention,
            ambient,
            coset,
            blocks: Vec::new(),
        })
    }

    pub fn graph(&self) -> &AbelianColoredGraph {
        &self.graph
    }

    pub fn ambient(&self) -> &GeneratorSet {
        &self.ambient
    }

    pub fn coset(&self) -> &MorphismCoset {
        &self.coset
    }

    pub fn blocks(&self) -> &[ProcessedBlock] {
        &self.blocks
    }

    fn check_block(&self, i: usize, j: usize) -> Result<()> {
        let m = self.graph.num_classes();
        if i >= j || j >= m {
            return Err(Error::Invariant(format!("block ({i}, {j}) is not an inter-class block")));
        }
        if self.blocks.iter().any(|b| (b.i, b.j) == (i, j)) {
            return Err(Error::Invariant(format!("block ({i}, {j}) was already processed")));
        }
        Ok(())
    }

    /// Anchor pairs `(a, b)` whose block constraint meets the current coset.
    pub fn compatible_pairs(&self, i: usize, j: usize) -> Result<Vec<(usize, usize)>> {
        self.check_block(i, j)?;
        Ok(self.compatible_local(i, j)?.1.into_iter().map(|(a, b, _)| (a, b)).collect())
    }

    /// The block morphism plus compatible pairs as (a, b, value), global points.
    #[allow(clippy::type_complexity)]
    fn compatible_local(&self, i: usize, j: usize) -> Result<(Arc<ThetaMorphism>, Vec<(usize, usize, Permutation)>)> {
        let g = &self.graph;
        let theta = Arc::new(ThetaMorphism::new(g.clone(), i, j, Layout::Pruned));
        let all = (0..g.class_size(i)).flat_map(|a| (0..g.class_size(j)).map(move |b| (a, b)));
        let globalize = |a: usize, b: usize, v| (g.class(i)[a], g.class(j)[b], v);
        if theta.omega().len() == 1 {
            let id = Permutation::identity(theta.codomain_degree());
            return Ok((theta, all.map(|(a, b)| globalize(a, b, id.clone())).collect()));
        }
        // one image chain serves every candidate value
        let morphism = tensor(&[self.coset.morphism.clone(), PermMorphism::Theta(theta.clone())])?;
        let chain = image_chain(&morphism, &self.ambient)?;
        let mut verdicts: HashMap<Permutation, bool> = HashMap::new();
        let mut out = Vec::new();
        for (a, b) in all {
            let v = theta.value(a, b);
            let ok = match verdicts.get(&v) {
                Some(&ok) => ok,
                None => {
                    let ok = chain.contains(&Permutation::concat(&[&self.coset.value, &v]))?;
                    verdicts.insert(v.clone(), ok);
                    ok
                }
            };
            if ok {
                out.push(globalize(a, b, v));
            }
        }
        Ok((theta, out))
    }

    fn block_encoding(&self, i: usize, j: usize, edges: &[(usize, usize)], a: usize, b: usize) -> Vec<(usize, usize)> {
        let g = &self.graph;
        let (la, lb) = (g.local_index(a), g.local_index(b));
        let num = |p: usize| {
            let c = g.class_of(p);
            let anchor = if c == i { la } else { lb };
            g.offset(c) + g.label(c, anchor, g.local_index(p))
        };
        debug_assert!(edges.iter().all(|&(u, v)| [u, v].iter().all(|&p| [i, j].contains(&g.class_of(p)))));
        let mut enc: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (num(u), num(v))).collect();
        enc.sort_unstable();
        enc
    }

    #[allow(clippy::type_complexity)]
    fn minimize(
        &self,
        i: usize,
        j: usize,
    ) -> Result<(Arc<ThetaMorphism>, Vec<(usize, usize, Permutation)>, Vec<(usize, usize)>)> {
        let (theta, compatible) = self.compatible_local(i, j)?;
        let edges = self.graph.block_edges(i, j);
        let mut best: Option<Vec<(usize, usize)>> = None;
        let mut winners = Vec::new();
        for (a, b, v) in compatible {
            let enc = self.block_encoding(i, j, &edges, a, b);
            let ord = match &best {
                None => Ordering::Less,
                Some(cur) => self.convention.compare(&enc, cur),
            };
            match ord {
                Ordering::Less => {
                    best = Some(enc);
                    winners = vec![(a, b, v)];
                }
                Ordering::Equal => winners.push((a, b, v)),
                Ordering::Greater => {}
            }
        }
        let best = best.ok_or(Error::EmptyCompatibleSet(i, j))?;
        if winners.iter().any(|w| w.2 != winners[0].2) {
            return Err(Error::Invariant(format!(
                "minimizing pairs of block ({i}, {j}) disagree on the block value"
            )));
        }
        Ok((theta, winners, best))
    }

    /// Compatible pairs with the smallest block encoding, and that encoding.
    pub fn min_pairs(&self, i: usize, j: usize) -> Result<(Pairs, Pairs)> {
        self.check_block(i, j)?;
        let (_, winners, enc) = self.minimize(i, j)?;
        Ok((winners.into_iter().map(|(a, b, _)| (a, b)).collect(), enc))
    }

    /// Processes block `(i, j)`: emits its minimal encoding and restricts
    /// the coset to the anchor tuples achieving it.
    pub fn step(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_block(i, j)?;
        let (theta, winners, encoding) = self.minimize(i, j)?;
        let constraint = if theta.omega().len() > 1 {
            let v = winners[0].2.clone();
            let c = MorphismCoset::new(self.ambient.clone(), PermMorphism::Theta(theta.clone()), v.clone())?;
            self.coset = coset_intersect(&self.coset, &c)?;
            Some((theta, v))
        } else {
            None
        };
        self.blocks.push(ProcessedBlock {
            i,
            j,
            winners: winners.into_iter().map(|(a, b, _)| (a, b)).collect(),
            encoding,
            constraint,
        });
        Ok(())
    }

    /// Assembles the canonical form once every inter-class block is done.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        let g = &self.graph;
        let m = g.num_classes();
        if self.blocks.len() != m * (m.saturating_sub(1)) / 2 {
            return Err(Error::Invariant("not every block has been processed".into()));
        }
        let mut edges: Vec<(usize, usize)> = self.blocks.iter().flat_map(|b| b.encoding.iter().copied()).collect();
        let mut phi = Vec::with_capacity(m);
        for i in 0..m {
            let s = g.class_size(i);
            let off = g.offset(i);
            let intra = g.block_edges(i, i);
            let first = intra_encoding(g, i, &intra, 0);
            let minimal = (0..s).min_by_key(|&a| g.class(i)[a]).expect("classes are nonempty");
            for a in 0..s {
                if intra_encoding(g, i, &intra, a) != first {
                    return Err(Error::Invariant(format!(
                        "class {i}: intra-class encoding depends on the anchor after refinement"
                    )));
                }
            }
            edges.extend(first.iter().map(|&(u, v)| (u + off, v + off)));

            let encode_phi = |a: usize| -> Vec<Vec<usize>> {
                let gammas = g.phi(i);
                gammas
                    .iter()
                    .map(|gj| (0..s).map(|mu| g.label(i, a, gj[gammas[mu][a]])).collect())
                    .collect()
            };
            let chosen = encode_phi(minimal);
            for a in 0..s {
                if encode_phi(a) != chosen {
                    return Err(Error::Invariant(format!("class {i}: group encoding depends on the anchor")));
                }
            }
            phi.push(chosen);
        }
        edges.sort_unstable();
        if edges.len() != g.edges().len() {
            return Err(Error::Invariant("canonical edge count differs from the input".into()));
        }
        Ok(CanonicalForm {
            n: g.n(),
            class_sizes: g.class_sizes(),
            edges,
            phi,
        })
    }
}

pub fn compatible_pairs(state: &CanonState, i: usize, j: usize) -> Result<Vec<(usize, usize)>> {
    state.compatible_pairs(i, j)
}

pub fn min_pairs(state: &CanonState, i: usize, j: usize) -> Result<(Pairs, Pairs)> {
    state.min_pairs(i, j)
}

/// Canonical form of `g` under the default comparison convention.
pub fn canonize(g: &AbelianColoredGraph) -> Result<CanonicalForm> {
    Ok(canonize_with(g, Convention::EdgesFirst)?.0)
}

/// Runs the full pipeline and also returns the final state.
pub fn canonize_with(g: &AbelianColoredGraph, convention: Convention) -> Result<(CanonicalForm, CanonState)> {
    let refined = refine_with(g, convention)?;
    let m = refined.num_classes();
    let mut state = CanonState::new(refined, convention)?;
    for i in 0..m {
        for j in i + 1..m {
            state.step(i, j)?;
        }
    }
    Ok((state.canonical_form()?, state))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{canon_oracle, validate, RawColoredGraph};
    use super::*;

    #[test]
    fn fixture_forms() {
        let c4 = canonize(&c4()).unwrap();
        assert_eq!(c4.edges, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(c4, canon_oracle(&super::super::fixtures::c4(), 1000).unwrap());

        let b = canonize(&b()).unwrap();
        assert_eq!(b.edges, vec![(0, 2), (2, 0)]);
        assert_eq!(b.class_sizes, vec![2, 2]);
        assert_eq!(b, canon_oracle(&super::super::fixtures::b(), 1000).unwrap());
    }

    #[test]
    fn fixture_b_block() {
        let state = CanonState::new(b(), Convention::EdgesFirst).unwrap();
        let mut all = state.compatible_pairs(0, 1).unwrap();
        all.sort();
        assert_eq!(all, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        let (winners, enc) = state.min_pairs(0, 1).unwrap();
        assert_eq!(winners, vec![(0, 2)]);
        assert_eq!(enc, vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn edgeless_graph() {
        let raw = RawColoredGraph {
            n: 5,
            classes: vec![vec![3, 1], vec![0, 4, 2]],
            edges: vec![],
            phi: vec![
                vec![vec![0, 1], vec![1, 0]],
                vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            ],
        };
        let f = canonize(&validate(&raw).unwrap()).unwrap();
        assert!(f.edges.is_empty());
        assert_eq!(f.phi[0], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(f.phi[1], vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
    }

    #[test]
    fn third_class_compatibility_shrinks() {
        // classes {0,1}, {2,3}, {4,5}, each Z2, one edge into each later class
        let z2 = vec![vec![0, 1], vec![1, 0]];
        let raw = RawColoredGraph {
            n: 6,
            classes: vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            edges: vec![(0, 2), (0, 4)],
            phi: vec![z2.clone(), z2.clone(), z2],
        };
        let g = validate(&raw).unwrap();
        let mut state = CanonState::new(g, Convention::EdgesFirst).unwrap();
        assert_eq!(state.compatible_pairs(0, 2).unwrap().len(), 4);
        state.step(0, 1).unwrap();
        assert_eq!(state.blocks()[0].winners, vec![(0, 2)]);
        let mut c = state.compatible_pairs(0, 2).unwrap();
        c.sort();
        assert_eq!(c, vec![(0, 4), (0, 5)]);
        state.step(0, 2).unwrap();
        // block (1,2) has no edges, so it constrains nothing
        assert_eq!(state.compatible_pairs(1, 2).unwrap().len(), 4);
        state.step(1, 2).unwrap();
        let form = state.canonical_form().unwrap();
        assert_eq!(form.edges, vec![(0, 2), (0, 4)]);
    }
}
