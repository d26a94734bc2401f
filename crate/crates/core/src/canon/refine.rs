use std::collections::BTreeMap;

use super::{validate, AbelianColoredGraph, Convention, RawColoredGraph};
use crate::error::{Error, Result};

/// Splits every class by the encoding of its intra-class edges under each
/// anchor, and restricts the class group to the edge-preserving subgroup.
///
/// Anchors `a`, `a'` give the same encoding exactly when `γ_{a→a'}` preserves
/// the intra-class edges, so the parts are the orbits of that subgroup and it
/// acts regularly on each of them. Parts are ordered by encoding. Repeats
/// until nothing splits.
pub fn refine_intra(g: &AbelianColoredGraph) -> Result<AbelianColoredGraph> {
    refine_with(g, Convention::EdgesFirst)
}

pub(crate) fn refine_with(g: &AbelianColoredGraph, conv: Convention) -> Result<AbelianColoredGraph> {
    let mut current = g.clone();
    loop {
        let (next, changed) = refine_round(&current, conv)?;
        if !changed {
            return Ok(current);
        }
        current = next;
    }
}

/// Encoding of `E_i` relative to `map_a`, without the class offset.
pub(crate) fn intra_encoding(g: &AbelianColoredGraph, i: usize, edges: &[(usize, usize)], a: usize) -> Vec<(usize, usize)> {
    let mut enc: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| (g.label(i, a, g.local_index(u)), g.label(i, a, g.local_index(v))))
        .collect();
    enc.sort_unstable();
    enc
}

fn refine_round(g: &AbelianColoredGraph, conv: Convention) -> Result<(AbelianColoredGraph, bool)> {
    let mut classes = Vec::new();
    let mut phi = Vec::new();
    let mut changed = false;
    for i in 0..g.num_classes() {
        let s = g.class_size(i);
        let edges = g.block_edges(i, i);
        let mut groups: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
        for a in 0..s {
            groups.entry(intra_encoding(g, i, &edges, a)).or_default().push(a);
        }
        if groups.len() == 1 {
            classes.push(g.class(i).to_vec());
            phi.push(g.phi(i).to_vec());
            continue;
        }
        changed = true;
        let mut parts: Vec<(Vec<(usize, usize)>, Vec<usize>)> = groups.into_iter().collect();
        parts.sort_by(|x, y| conv.compare(&x.0, &y.0));

        let edge_set: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
        let stabilizer: Vec<usize> = (0..s)
            .filter(|&mu| {
                edges
                    .iter()
                    .all(|&(u, v)| edge_set.contains(&(g.gamma(i, mu, u), g.gamma(i, mu, v))))
            })
            .collect();

        for (_, part) in parts {
            if stabilizer.len() != part.len() {
                return Err(Error::RefinementBrokeTransitivity(i));
            }
            let mut position = vec![usize::MAX; s];
            for (k, &a) in part.iter().enumerate() {
                position[a] = k;
            }
            let mut restricted = Vec::with_capacity(stabilizer.len());
            for &mu in &stabilizer {
                let images: Vec<usize> = part.iter().map(|&a| position[g.phi(i)[mu][a]]).collect();
                if images.contains(&usize::MAX) {
                    return Err(Error::RefinementBrokeTransitivity(i));
                }
                restricted.push(images);
            }
            classes.push(part.iter().map(|&a| g.class(i)[a]).collect());
            phi.push(restricted);
        }
    }
    if !changed {
        return Ok((g.clone(), false));
    }
    let raw = RawColoredGraph {
        n: g.n(),
        classes,
        edges: g.edges().iter().copied().collect(),
        phi,
    };
    let refined = validate(&raw).map_err(|e| match e {
        Error::NotTransitive { class } | Error::NotAGroup { class } | Error::WrongEnumerationLength { class, .. } => {
            Error::RefinementBrokeTransitivity(class)
        }
        other => other,
    })?;
    Ok((refined, true))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn z(s: usize) -> Vec<Vec<usize>> {
        (0..s).map(|j| (0..s).map(|x| (x + j) % s).collect()).collect()
    }

    #[test]
    fn unchanged_cases() {
        let g = c4();
        let r = refine_intra(&g).unwrap();
        assert_eq!(r.classes(), g.classes());
        let b = b();
        assert_eq!(refine_intra(&b).unwrap().classes(), b.classes());
    }

    #[test]
    fn chord_splits_z4() {
        // a single chord {0,2} in both directions: anchors 0,2 see it at
        // (0,2),(2,0); anchors 1,3 see it at (1,3),(3,1)
        let raw = RawColoredGraph {
            n: 4,
            classes: vec![vec![0, 1, 2, 3]],
            edges: vec![(0, 2), (2, 0)],
            phi: vec![z(4)],
        };
        let g = validate(&raw).unwrap();
        let r = refine_intra(&g).unwrap();
        assert_eq!(r.classes(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(r.phi(0), &[vec![0, 1], vec![1, 0]]);

        // brute force: anchors grouped by encoding, parts sorted by encoding
        let edges = g.block_edges(0, 0);
        let mut encs: Vec<(Vec<(usize, usize)>, usize)> =
            (0..4).map(|a| (intra_encoding(&g, 0, &edges, a), a)).collect();
        encs.sort_by(|x, y| Convention::EdgesFirst.compare(&x.0, &y.0).then(x.1.cmp(&y.1)));
        assert_eq!(encs.iter().map(|e| e.1).collect::<Vec<_>>(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn refined_classes_have_uniform_encodings() {
        let raw = RawColoredGraph {
            n: 6,
            classes: vec![(0..6).collect()],
            edges: vec![(0, 1), (3, 4), (0, 3)],
            phi: vec![z(6)],
        };
        let r = refine_intra(&validate(&raw).unwrap()).unwrap();
        for i in 0..r.num_classes() {
            let e = r.block_edges(i, i);
            let first = intra_encoding(&r, i, &e, 0);
            for a in 1..r.class_size(i) {
                assert_eq!(intra_encoding(&r, i, &e, a), first);
            }
        }
        assert_eq!(r.n(), 6);
    }
}
