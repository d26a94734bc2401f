pub mod canon;
pub mod error;
pub mod gen;
pub mod group;
pub mod io;
pub mod morphism;
pub mod perm;
pub mod rank;
pub mod selftest;

pub use error::{Error, Result};
pub use group::{BigCard, GeneratorSet, StabilizerChain};
pub use perm::{Permutation, RelationGraph};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/groups.md")]
    pub struct Groups;
    #[doc = include_str!("../../../book/src/morphisms.md")]
    pub struct Morphisms;
    #[doc = include_str!("../../../book/src/rank.md")]
    pub struct Rank;
    #[doc = include_str!("../../../book/src/colored_graphs.md")]
    pub struct ColoredGraphs;
    #[doc = include_str!("../../../book/src/canonization.md")]
    pub struct Canonization;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../book/src/testing.md")]
    pub struct Testing;
}
