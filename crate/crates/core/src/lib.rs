//! Rings with involution, the *-Euclidean division step, `SL_*(2, A)` and its
//! Bruhat generators, Dieudonne determinants and finite-support adelic division.

pub mod adelic;
pub mod error;
pub mod euclid;
pub mod harness;
pub mod linalg;
pub mod local;
pub mod numtheory;
pub(crate) mod poly;
pub mod quaternion;
pub mod sl_star;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{Elem, Element, Ring, RingDescriptor};
