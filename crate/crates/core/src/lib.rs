//! Exact computer algebra for Koszul complexes of polynomial systems:
//! Grassmann algebra with its dual pairing, boundary operators, divided
//! differences and the difference homotopy, the difference Jacobian with
//! the J-map and J-product, and an exact truncated-degree homology solver.

pub mod bezout;
pub mod boundary;
pub mod context;
pub mod error;
pub mod expr;
pub mod mv;
pub mod pairing;
pub mod poly;
pub mod sample;
pub mod solver;
pub mod verify;

pub use context::{Context, ContextBuilder};
pub use error::AlgebraError;
pub use mv::{Mv, Q};
