use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("root order {root_order} does not divide target order {target_order}")]
    NonDivisibleOrder { root_order: u64, target_order: u64 },
    #[error("character value equals 1; the weight belongs to the vertex sublist")]
    TrivialCharacter,
    #[error("series truncated at order {order} cannot act on a polynomial of degree {degree}")]
    InsufficientTruncation { order: usize, degree: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight list contains a zero vector")]
    ZeroVector,
    #[error("weight list does not span the ambient space")]
    NotSpanning,
    #[error("perturbation vector is not generic for the weight list")]
    NonGenericVector,
    #[error("point lies on a wall of the arrangement")]
    NonGenericPoint,
    #[error("could not sample alcove points after {attempts} attempts")]
    SamplingFailed { attempts: usize },
    #[error("interpolation system singular after {attempts} attempts")]
    SingularInterpolation { attempts: usize },
    #[error("interpolated piece disagrees with direct evaluation at a held-out point")]
    HeldOutMismatch,
    #[error("torus point is not a vertex of the weight list")]
    NotAVertex,
    #[error("weight list is not unimodular")]
    NotUnimodular,
    #[error("point is not in the shifted lattice of the measure")]
    NotOnLattice,
    #[error("germ base point differs from the evaluation point")]
    GermMismatch,
    #[error("vertex sum has a non-rational component: {0}")]
    NonRationalSum(String),
    #[error("Weyl group exceeds the cap of {cap} elements")]
    WeylGroupTooLarge { cap: usize },
    #[error("weight is not dominant")]
    NonDominant,
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("inconsistent embedding: {0}")]
    InconsistentEmbedding(String),
    #[error("multiplicity support touches a chamber wall")]
    WallSupport,
    #[error("parse error: {0}")]
    Parse(String),
}
