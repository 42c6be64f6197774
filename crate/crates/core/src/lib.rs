//! Exact arithmetic for value semigroups and Poincaré series of finite sets
//! of divisorial valuations on a regular two-dimensional local ring.
//!
//! Everything is computed from the combinatorics of the blow-up sequence:
//! proximities give the intersection matrix `M`, and the rows of
//! `A = -M^{-1}` are the value vectors of curvettes.

// Matrices and boxes are indexed in lockstep throughout.
#![allow(clippy::needless_range_loop)]

pub mod bareiss;
pub mod checks;
pub mod dualgraph;
pub mod error;
pub mod input;
pub mod poincare;
pub mod report;
pub mod resolution;
pub mod semigroup;
pub mod series;

pub use error::{Error, Result};
pub use resolution::{build_model, Center, CenterKind, ResolutionModel};
