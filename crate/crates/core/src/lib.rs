//! Exact exponent calculus for tensor products of Weil-Deligne representations.
//!
//! Representations are modelled abstractly: irreducible Weil-group
//! representations are replaced by unramified-twist orbits carrying a
//! dimension, a Swan slope and a pairing table of tensor slopes. On top of that
//! the crate computes Artin and Swan exponents, checks the lower and upper
//! bounds for tensor products, and cross-checks the closed formulas against an
//! independent linear-algebra oracle.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exponents;
pub mod generator;
pub mod jordan;
pub mod maxplus;
pub mod model;
pub mod rational;
pub mod rep;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{ClassId, IrreducibleClass, ModelInstance, Mode};
pub use rational::Rational;
pub use rep::{parse_rep, WDRep};
