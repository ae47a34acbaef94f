//! Exact-arithmetic lattice algebra and special values of quadratic Artin
//! L-functions.
//!
//! The crate is organized around a chain of exact computations:
//!
//! - [`matrix`]: integer matrices, Smith normal form, lattice utilities;
//! - [`group`]: finitely generated abelian groups and homomorphisms;
//! - [`seq`]: determinants of exact sequences and the torsion identities;
//! - [`cyclic`]: Tate cohomology and Herbrand quotients of cyclic actions;
//! - [`local`]: local L-factors and their leading terms at s = 0;
//! - [`quadratic`]: quadratic fields, class numbers, fundamental units;
//! - [`lseries`]: Dirichlet L-values of quadratic characters;
//! - [`euler`]: the assembled algebraic-vs-analytic comparisons;
//! - [`generate`]: seeded random generators used by the property suites;
//! - [`io`]: the file formats consumed by the CLI.

pub mod error;
pub mod matrix;
pub mod group;
pub mod seq;
pub mod cyclic;
pub mod local;
pub mod quadratic;
pub mod lseries;
pub mod euler;

pub use error::{Error, Result};
