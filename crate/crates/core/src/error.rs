use thiserror::Error;

/// Everything that can go wrong across the engine.
///
/// Variants fall into two groups: input errors (malformed permutations,
/// matrices, colored graphs) and internal invariant violations, which signal
/// either a bug or a broken input contract such as a "morphism" that does not
/// respect multiplication. [`Error::is_internal`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("image sequence is not a bijection: {0}")]
    NotABijection(String),
    #[error("domain mismatch: expected {expected} points, got {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("relation is not the graph of a permutation: {0}")]
    NotAPermutationGraph(String),
    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("group order is not divisible by image order; the map is not a morphism on this group")]
    NonDivisible,
    #[error("permutation does not lie in the source group of the morphism")]
    EvaluationOutsideSource,
    #[error("morphisms do not share a source domain: {0} vs {1}")]
    SourceMismatch(usize, usize),

    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("image group order {order} is not a power of {modulus}")]
    NonPowerOrder { order: String, modulus: u64 },
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("class {class}: enumeration is not closed under composition and inverse")]
    NotAGroup { class: usize },
    #[error("class {class}: enumerated group is not commutative")]
    NotAbelian { class: usize },
    #[error("class {class}: enumerated group is not transitive on its class")]
    NotTransitive { class: usize },
    #[error("class {class}: expected {expected} distinct permutations, found {found}")]
    WrongEnumerationLength { class: usize, expected: usize, found: usize },
    #[error("edge ({0}, {1}) references a point outside the graph")]
    EdgeOutOfRange(usize, usize),
    #[error("classes do not partition the points: {0}")]
    BadPartition(String),
    #[error("point {point} is not in class {class}")]
    WrongClass { point: usize, class: usize },
    #[error("labelings cover overlapping classes")]
    OverlappingClasses,
    #[error("point {0} is not covered by the labeling")]
    UncoveredPoint(usize),
    #[error("permutation moves a layer tag, so it is not block diagonal")]
    NotBlockDiagonal,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("no compatible pair in block ({0}, {1})")]
    EmptyCompatibleSet(usize, usize),
    #[error("refinement of class {0} produced a non-transitive group")]
    RefinementBrokeTransitivity(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that indicate a broken internal invariant rather than
    /// bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonDivisible
                | Error::NonPowerOrder { .. }
                | Error::EmptyCompatibleSet(..)
                | Error::RefinementBrokeTransitivity(_)
                | Error::Invariant(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
