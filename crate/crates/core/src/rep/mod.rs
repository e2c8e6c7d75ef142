//! Root data, weight multiplicity and branching oracles, and the end-to-end
//! check that deconvolving the branching measure returns the multiplicities.

mod branching;
mod freudenthal;
mod pipeline;
mod root;

pub use branching::{
    antiinvariant_extend, branch, branched_dimension, phi_from_embedding, phi_from_embedding_with,
    restricted_character, subgroup_dimension, EmbeddingSpec, Selection,
};
pub use freudenthal::{weight_multiplicities, weyl_dimension};
pub use pipeline::{
    probe_window, recovered_multiplicities, verify_branching, BranchingOptions, BranchingReport, PointRecord,
};
pub use root::{IntMatrix, RootDatum, WeylElement, WEYL_GROUP_CAP};
