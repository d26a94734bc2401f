use std::collections::BTreeMap;

use super::AbelianColoredGraph;
use crate::error::{Error, Result};

/// The labeling `map^i_a` of class `i` induced by anchor `a`:
/// `γ^i_j(a) ↦ offset(i) + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLabeling {
    pub class: usize,
    pub anchor: usize,
    pub table: BTreeMap<usize, usize>,
}

pub fn local_labeling(g: &AbelianColoredGraph, i: usize, a: usize) -> Result<LocalLabeling> {
    if i >= g.num_classes() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: g.num_classes(),
        });
    }
    if a >= g.n() || g.class_of(a) != i {
        return Err(Error::WrongClass { point: a, class: i });
    }
    let table = (0..g.class_size(i))
        .map(|j| (g.gamma(i, j, a), g.offset(i) + j))
        .collect();
    Ok(LocalLabeling {
        class: i,
        anchor: a,
        table,
    })
}

/// A point-to-number map defined on a union of classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialLabeling {
    pub table: BTreeMap<usize, usize>,
}

impl From<LocalLabeling> for PartialLabeling {
    fn from(l: LocalLabeling) -> Self {
        PartialLabeling { table: l.table }
    }
}

impl PartialLabeling {
    /// Union of two labelings on disjoint domains.
    pub fn oplus(&self, other: &PartialLabeling) -> Result<PartialLabeling> {
        let mut table = self.table.clone();
        for (&p, &v) in &other.table {
            if table.insert(p, v).is_some() {
                return Err(Error::OverlappingClasses);
            }
        }
        Ok(PartialLabeling { table })
    }

    pub fn get(&self, p: usize) -> Option<usize> {
        self.table.get(&p).copied()
    }
}

pub fn oplus(l1: &LocalLabeling, l2: &LocalLabeling) -> Result<PartialLabeling> {
    if l1.class == l2.class {
        return Err(Error::OverlappingClasses);
    }
    PartialLabeling::from(l1.clone()).oplus(&l2.clone().into())
}

/// `{(σ(u), σ(v)) | (u, v) ∈ pairs}`, sorted.
pub fn encode_relative(pairs: &[(usize, usize)], labeling: &PartialLabeling) -> Result<Vec<(usize, usize)>> {
    let mut out = pairs
        .iter()
        .map(|&(u, v)| {
            let su = labeling.get(u).ok_or(Error::UncoveredPoint(u))?;
            let sv = labeling.get(v).ok_or(Error::UncoveredPoint(v))?;
            Ok((su, sv))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn table(l: &LocalLabeling) -> Vec<(usize, usize)> {
        l.table.iter().map(|(&a, &b)| (a, b)).collect()
    }

    #[test]
    fn local_labeling_examples() {
        let g = c4();
        assert_eq!(table(&local_labeling(&g, 0, 0).unwrap()), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(table(&local_labeling(&g, 0, 1).unwrap()), vec![(0, 3), (1, 0), (2, 1), (3, 2)]);
        let b = b();
        assert_eq!(table(&local_labeling(&b, 1, 2).unwrap()), vec![(2, 2), (3, 3)]);
        assert!(matches!(local_labeling(&b, 1, 0), Err(Error::WrongClass { point: 0, class: 1 })));
    }

    #[test]
    fn oplus_examples() {
        let b = b();
        let u = oplus(&local_labeling(&b, 0, 0).unwrap(), &local_labeling(&b, 1, 2).unwrap()).unwrap();
        assert_eq!(u.table.into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        let l: PartialLabeling = local_labeling(&b, 0, 1).unwrap().into();
        assert_eq!(l.oplus(&PartialLabeling::default()).unwrap(), l);
        assert!(matches!(
            oplus(&local_labeling(&b, 0, 0).unwrap(), &local_labeling(&b, 0, 1).unwrap()),
            Err(Error::OverlappingClasses)
        ));
    }

    #[test]
    fn encode_examples() {
        let g = c4();
        let l0: PartialLabeling = local_labeling(&g, 0, 0).unwrap().into();
        assert!(encode_relative(&[], &l0).unwrap().is_empty());
        let edges: Vec<_> = g.edges().iter().copied().collect();
        assert_eq!(encode_relative(&edges, &l0).unwrap(), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);

        let b = b();
        let l = oplus(&local_labeling(&b, 0, 1).unwrap(), &local_labeling(&b, 1, 2).unwrap()).unwrap();
        assert_eq!(encode_relative(&b.block_edges(0, 1), &l).unwrap(), vec![(1, 2), (2, 1)]);
        let partial: PartialLabeling = local_labeling(&b, 0, 0).unwrap().into();
        assert!(matches!(
            encode_relative(&b.block_edges(0, 1), &partial),
            Err(Error::UncoveredPoint(2))
        ));
    }
}
