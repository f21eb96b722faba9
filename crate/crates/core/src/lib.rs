//! Arithmetic in F_q[t] and the Smarandache function S over it.
//!
//! Polynomials are ordered by the base-q codec δ; the factorial f! is the
//! product of `f - g` over all `g` below `f`, and S(f) is the smallest `g`
//! with `f | g!`.

pub mod error;
pub mod limits;
pub mod registry;
mod literal;

pub mod gf;
pub mod poly;
pub mod factor;
pub mod smarandache;
pub mod census;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use limits::Limits;
pub use poly::{Nat, Poly};
pub use registry::{Named, Registry};
