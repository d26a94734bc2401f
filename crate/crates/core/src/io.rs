//! JSON file formats. Indices are 0-based everywhere.

use serde::{Deserialize, Serialize};

use crate::canon::{validate, AbelianColoredGraph, RawColoredGraph};
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::perm::Permutation;
use crate::rank::MatrixModP;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub n: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn to_generator_set(&self) -> Result<GeneratorSet> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                if g.len() != self.n {
                    return Err(Error::DomainMismatch {
                        expected: self.n,
                        found: g.len(),
                    });
                }
                Permutation::from_images(g.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(self.n, gens)
    }

    pub fn from_generator_set(s: &GeneratorSet) -> Self {
        GroupFile {
            n: s.degree(),
            generators: s.gens().iter().map(Permutation::to_vec).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub modulus: u64,
    pub rows: Vec<Vec<u64>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<MatrixModP> {
        MatrixModP::new(self.modulus, self.rows.clone())
    }
}

/// Provenance of a generated instance.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenHeader {
    pub kind: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_vertex: Option<usize>,
}

/// A graph with abelian colors on disk. With `undirected` set, every listed
/// edge stands for both orientations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoredGraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<GenHeader>,
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
    #[serde(default)]
    pub undirected: bool,
    pub edges: Vec<(usize, usize)>,
    pub phi: Vec<Vec<Vec<usize>>>,
}

impl ColoredGraphFile {
    pub fn to_raw(&self) -> RawColoredGraph {
        let mut edges = self.edges.clone();
        if self.undirected {
            edges.extend(self.edges.iter().map(|&(u, v)| (v, u)));
        }
        RawColoredGraph {
            n: self.n,
            classes: self.classes.clone(),
            edges,
            phi: self.phi.clone(),
        }
    }

    pub fn to_graph(&self) -> Result<AbelianColoredGraph> {
        validate(&self.to_raw())
    }

    pub fn from_raw(raw: &RawColoredGraph) -> Self {
        ColoredGraphFile {
            header: None,
            n: raw.n,
            classes: raw.classes.clone(),
            undirected: false,
            edges: raw.edges.clone(),
            phi: raw.phi.clone(),
        }
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_file<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::CanonicalForm;
    use proptest::prelude::*;

    #[test]
    fn undirected_flag_expands() {
        let f: ColoredGraphFile = parse(
            r#"{"n":4,"classes":[[0,1],[2,3]],"undirected":true,"edges":[[0,2]],
                "phi":[[[0,1],[1,0]],[[0,1],[1,0]]]}"#,
        )
        .unwrap();
        let g = f.to_graph().unwrap();
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(parse::<GroupFile>("{"), Err(Error::Parse(_))));
        let g = GroupFile {
            n: 3,
            generators: vec![vec![0, 1]],
        };
        assert!(g.to_generator_set().is_err());
        let m = MatrixFile {
            modulus: 3,
            rows: vec![vec![1, 2], vec![0]],
        };
        assert!(m.to_matrix().is_err());
    }

    proptest! {
        #[test]
        fn group_file_round_trip(n in 1usize..6, gens in prop::collection::vec(Just(()), 0..4), seed in any::<u64>()) {
            let mut perms = Vec::new();
            for (k, _) in gens.iter().enumerate() {
                let mut v: Vec<usize> = (0..n).collect();
                v.rotate_left((seed as usize + k) % n);
                perms.push(v);
            }
            let f = GroupFile { n, generators: perms };
            prop_assert_eq!(parse::<GroupFile>(&to_json(&f)).unwrap(), f);
        }

        #[test]
        fn matrix_file_round_trip(modulus in 2u64..10, rows in prop::collection::vec(prop::collection::vec(0u64..100, 3), 0..4)) {
            let f = MatrixFile { modulus, rows };
            prop_assert_eq!(parse::<MatrixFile>(&to_json(&f)).unwrap(), f);
        }

        #[test]
        fn canonical_form_round_trip(edges in prop::collection::vec((0usize..5, 0usize..5), 0..8)) {
            let f = CanonicalForm { n: 5, class_sizes: vec![2, 3], edges, phi: vec![vec![vec![0, 1], vec![1, 0]]] };
            prop_assert_eq!(parse::<CanonicalForm>(&f.to_json()).unwrap(), f);
        }
    }
}
