//! Cubature formulas and Euclidean designs built from orbits of the
//! reflection groups `A_n`, `B_n` and `D_n`.

pub mod scalar;

pub use scalar::{Scalar, ScalarError};
pub mod designs;
pub mod groups;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod xu;

pub use poly::{Monomial, MultiPoly};
