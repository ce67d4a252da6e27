//! Pointwise algebra of generalized curvature tensors on a pseudo-Euclidean
//! model space: constructors, traces, the irreducible decomposition of
//! Weyl-type tensors, exact dimension counts, and identity batteries.

pub mod builders;
pub mod decomp;
pub mod dims;
pub mod error;
pub mod io;
pub mod scalar;
pub mod tensor;
pub mod traces;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Mode, Rational, Scalar};
pub use tensor::{Bilinear, Curv4, MembershipReport, Model, SpaceTag, Tensor};
