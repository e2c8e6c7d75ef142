//! Deconvolution of locally polynomial measures by the Todd-type operators
//! `Â(s,Φ)`, summed over the vertex set.

mod deconvolve;
mod operator;

pub use deconvolve::{
    deconvolve_at, deconvolve_unimodular, limit_value, reduced_quantization, Deconvolution, Deconvolver,
    PieceProvider, VertexContribution,
};
pub use operator::{build_vertex_operator, VertexOperator};
