//! Lattice conventions, the affine wall arrangement of `Φ`, alcove germs,
//! Smith normal form and the vertex set of the toric arrangement.
//!
//! The lattice is always `Z^d`; group-theoretic lattices are presented in
//! coordinates of a chosen basis before they reach this module.

mod snf;
mod torus;
mod walls;
mod weights;

pub use snf::{smith_normal_form, SmithDecomposition};
pub use torus::{common_order, require_vertex, vertex_set, TorusPoint};
pub use walls::{
    alcove_of, default_epsilon, is_generic, is_regular, sample_alcove_points, sample_alcove_points_with,
    wall_families, AffineWallFamily, AlcoveGerm, DEFAULT_SAMPLE_BUDGET,
};
pub(crate) use walls::germ_in;
pub use weights::WeightList;
