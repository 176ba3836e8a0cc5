//! Exact computations on the lower central series of free algebras and
//! their quotients by the symplectic form.

pub mod algebra;
pub mod b3;
pub mod cache;
pub mod claims;
pub mod error;
pub mod forms;
pub mod lcs;
pub mod linalg;
pub mod par;
pub mod rep;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Rational;
