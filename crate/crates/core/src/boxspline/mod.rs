//! Centered box splines, their local polynomial pieces and the twisted
//! convolutions `b(s,m,Φ)`.

mod eval;
mod forward;
mod piece;
mod twisted;

pub use eval::{eval_box, is_continuous};
pub use forward::{forward_piece, ForwardModel, MultiplicityFunction};
pub use piece::{local_piece, PieceTable, PolynomialGerm};
pub use twisted::{twisted_expansion, TwistedBoxExpansion};
