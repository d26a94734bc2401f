//! Brute-force reference: try every anchor tuple.

use std::cmp::Ordering;

use super::ambient::phi_of_anchors;
use super::refine::refine_with;
use super::{AbelianColoredGraph, CanonState, CanonicalForm, Convention};
use crate::error::{Error, Result};
use crate::morphism::PermMorphism;

fn check_cap(g: &AbelianColoredGraph, cap: usize) -> Result<()> {
    let mut total: usize = 1;
    for i in 0..g.num_classes() {
        total = total.saturating_mul(g.class_size(i));
        if total > cap {
            return Err(Error::CapExceeded { cap });
        }
    }
    Ok(())
}

/// Visits every anchor tuple (class-local indices) in odometer order.
fn for_each_tuple(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    let mut t = vec![0; sizes.len()];
    loop {
        f(&t);
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < sizes[k] {
                break;
            }
            t[k] = 0;
        }
    }
}

/// Point numbering of the labeling with the given local anchors, straight
/// from `number(γ_μ(a_i)) = offset(i) + μ`.
fn numbering(g: &AbelianColoredGraph, anchors: &[usize]) -> Vec<usize> {
    let mut num = vec![0; g.n()];
    for (i, &a) in anchors.iter().enumerate() {
        let class = g.class(i);
        for (mu, gamma) in g.phi(i).iter().enumerate() {
            num[class[gamma[a]]] = g.offset(i) + mu;
        }
    }
    num
}

fn encode(edges: &[(usize, usize)], num: &[usize]) -> Vec<(usize, usize)> {
    let mut enc: Vec<_> = edges.iter().map(|&(u, v)| (num[u], num[v])).collect();
    enc.sort_unstable();
    enc
}

pub fn canon_oracle(g: &AbelianColoredGraph, cap: usize) -> Result<CanonicalForm> {
    canon_oracle_with(g, cap, Convention::EdgesFirst)
}

/// Refines, then minimizes the tuple of inter-class block encodings over all
/// anchor tuples.
pub fn canon_oracle_with(g: &AbelianColoredGraph, cap: usize, conv: Convention) -> Result<CanonicalForm> {
    let r = refine_with(g, conv)?;
    check_cap(&r, cap)?;
    let m = r.num_classes();
    let blocks: Vec<Vec<(usize, usize)>> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| r.block_edges(i, j))
        .collect();
    let mut best: Option<(Vec<Vec<(usize, usize)>>, Vec<usize>)> = None;
    for_each_tuple(&r.class_sizes(), |t| {
        let num = numbering(&r, t);
        let encs: Vec<_> = blocks.iter().map(|b| encode(b, &num)).collect();
        let better = match &best {
            None => true,
            Some((cur, _)) => conv.compare_blocks(&encs, cur) == Ordering::Less,
        };
        if better {
            best = Some((encs, t.to_vec()));
        }
    });
    let (_, anchors) = best.expect("at least one tuple");
    let num = numbering(&r, &anchors);
    let mut inverse = vec![0; r.n()];
    for (p, &v) in num.iter().enumerate() {
        inverse[v] = p;
    }
    let all: Vec<_> = r.edges().iter().copied().collect();
    let edges = encode(&all, &num);
    let phi = (0..m)
        .map(|i| {
            let off = r.offset(i);
            (0..r.class_size(i))
                .map(|j| {
                    (0..r.class_size(i))
                        .map(|mu| num[r.gamma(i, j, inverse[off + mu])] - off)
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(CanonicalForm {
        n: r.n(),
        class_sizes: r.class_sizes(),
        edges,
        phi,
    })
}

/// An anchor tuple (global points) whose labeling lies in the final coset of
/// `state`. Depth-first over classes, pruning as soon as a block constraint
/// between two assigned classes fails.
pub fn witness(state: &CanonState, cap: usize) -> Result<Vec<usize>> {
    let g = state.graph();
    check_cap(g, cap)?;
    let m = g.num_classes();
    let mut anchors: Vec<usize> = (0..m).map(|i| g.class(i)[0]).collect();
    if search(state, &mut anchors, 0)? {
        Ok(anchors)
    } else {
        Err(Error::Invariant("final coset has no anchor tuple".into()))
    }
}

fn search(state: &CanonState, anchors: &mut Vec<usize>, depth: usize) -> Result<bool> {
    let g = state.graph();
    if depth == g.num_classes() {
        let lambda = phi_of_anchors(g, anchors)?;
        return Ok(state.coset().morphism.evaluate(&lambda)? == state.coset().value);
    }
    for k in 0..g.class_size(depth) {
        anchors[depth] = g.class(depth)[k];
        // unassigned classes hold placeholders; a block morphism only reads
        // the layers of its own two classes
        let lambda = phi_of_anchors(g, anchors)?;
        let mut ok = true;
        for block in state.blocks() {
            if block.j != depth {
                continue;
            }
            if let Some((theta, value)) = &block.constraint {
                if PermMorphism::Theta(theta.clone()).evaluate(&lambda)? != *value {
                    ok = false;
                    break;
                }
            }
        }
        if ok && search(state, anchors, depth + 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}
