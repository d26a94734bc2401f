//! Permutations of a dense point set `0..degree`.
//!
//! Composition follows the "apply the right factor first" convention:
//! `sigma.compose(&tau)` is the permutation `x -> sigma(tau(x))`. The same
//! convention is used by [`std::ops::Mul`], so `&sigma * &tau` means the same
//! thing. Every other module in the crate relies on this order.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A bijection of `0..degree`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Validates `images` as a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (x, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::NotABijection(format!("image {y} of {x} is out of range")));
            }
            if seen[y] {
                return Err(Error::NotABijection(format!("{y} is hit twice")));
            }
            seen[y] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|y| y as u32).collect(),
        })
    }

    /// Builds a permutation from a table already known to be a bijection.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&images));
        Permutation { images }
    }

    /// Product of disjoint cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree || touched[x] {
                    return Err(Error::NotABijection(format!("bad cycle point {x}")));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images.iter().map(|&y| y as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// `x -> self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_same_degree(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&y| self.images[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    /// `self^k` for a nonnegative exponent.
    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images.len() == other.images.len()
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    /// Smallest point moved by the permutation.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(x, &y)| x as u32 != y)
            .map(|(x, _)| x)
    }

    /// Block permutation acting as `parts[k]` on the k-th consecutive block.
    pub fn concat(parts: &[&Permutation]) -> Permutation {
        let mut images = Vec::with_capacity(parts.iter().map(|p| p.degree()).sum());
        let mut offset = 0u32;
        for p in parts {
            images.extend(p.images.iter().map(|&y| y + offset));
            offset += p.images.len() as u32;
        }
        Permutation { images }
    }

    /// The relation `{(x, self(x))}`.
    pub fn graph(&self) -> RelationGraph {
        RelationGraph {
            size: self.degree(),
            pairs: self.images.iter().enumerate().map(|(x, &y)| (x, y as usize)).collect(),
        }
    }

    pub(crate) fn check_same_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DomainMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.apply(x);
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on a degree mismatch; use [`Permutation::compose`] to get an error instead.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

/// A binary relation on `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationGraph {
    pub size: usize,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl RelationGraph {
    pub fn new(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= size || b >= size) {
            return Err(Error::NotAPermutationGraph(format!("pair ({a}, {b}) out of range")));
        }
        Ok(RelationGraph { size, pairs })
    }

    /// Reads the relation back as a permutation, if it is the graph of one.
    pub fn to_permutation(&self) -> Result<Permutation> {
        let mut images = vec![usize::MAX; self.size];
        for &(a, b) in &self.pairs {
            if images[a] != usize::MAX {
                return Err(Error::NotAPermutationGraph(format!("{a} has two images")));
            }
            images[a] = b;
        }
        if let Some(x) = images.iter().position(|&y| y == usize::MAX) {
            return Err(Error::NotAPermutationGraph(format!("{x} has no image")));
        }
        Permutation::from_images(images)
            .map_err(|_| Error::NotAPermutationGraph("targets are not distinct".into()))
    }
}

/// Free-function form of [`RelationGraph::to_permutation`].
pub fn perm_from_graph(r: &RelationGraph) -> Result<Permutation> {
    r.to_permutation()
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&y| {
        let y = y as usize;
        y < seen.len() && !std::mem::replace(&mut seen[y], true)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn from_images_cases() {
        assert!(p(&[0, 1, 2]).is_identity());
        assert_eq!(p(&[1, 0, 2]).to_string(), "(0 1)");
        assert!(matches!(
            Permutation::from_images(vec![1, 1, 2]),
            Err(Error::NotABijection(_))
        ));
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // sigma(tau(x)) evaluated by hand: x=0 -> tau 0 -> sigma 1; x=1 -> 2 -> 2; x=2 -> 1 -> 0
        assert_eq!(p(&[1, 0, 2]).compose(&p(&[0, 2, 1])).unwrap(), p(&[1, 2, 0]));
        let pi = p(&[2, 0, 3, 1]);
        assert_eq!(Permutation::identity(4).compose(&pi).unwrap(), pi);
        assert!(p(&[1, 0]).compose(&p(&[1, 0])).unwrap().is_identity());
        assert!(matches!(
            p(&[1, 0]).compose(&p(&[0, 1, 2])),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(p(&[1, 2, 0]).inverse(), p(&[2, 0, 1]));
        assert!(Permutation::identity(5).inverse().is_identity());
        assert_eq!(p(&[1, 0]).inverse(), p(&[1, 0]));
    }

    #[test]
    fn graph_round_trip_and_errors() {
        let swap = RelationGraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(perm_from_graph(&swap).unwrap(), p(&[1, 0]));
        let id = RelationGraph::new(2, [(0, 0), (1, 1)]).unwrap();
        assert!(perm_from_graph(&id).unwrap().is_identity());
        let partial = RelationGraph::new(2, [(0, 1)]).unwrap();
        assert!(matches!(perm_from_graph(&partial), Err(Error::NotAPermutationGraph(_))));
        let collide = RelationGraph::new(2, [(0, 1), (1, 1)]).unwrap();
        assert!(perm_from_graph(&collide).is_err());
        let two_images = RelationGraph::new(2, [(0, 1), (0, 0), (1, 0)]).unwrap();
        assert!(perm_from_graph(&two_images).is_err());
    }

    #[test]
    fn cycles_pow_and_concat() {
        let c = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(c.to_vec(), vec![1, 2, 0, 4, 3]);
        assert!(c.pow(6).is_identity());
        assert_eq!(c.pow(2), &c * &c);
        let block = Permutation::concat(&[&p(&[1, 0]), &p(&[0, 2, 1])]);
        assert_eq!(block.to_vec(), vec![1, 0, 2, 4, 3]);
        assert_eq!(block.first_moved(), Some(0));
    }
}
