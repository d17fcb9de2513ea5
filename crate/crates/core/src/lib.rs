//! Hyperbolic isoperimetric-type inequalities for cyclic and tangential
//! polygons.
//!
//! The crate is layered bottom-up:
//!
//! - [`hypmath`]: stable inverse hyperbolic functions, the right-triangle
//!   relations and regular n-gon conversions.
//! - [`hmodel`]: hyperboloid-model points and polygon embeddings, used as an
//!   independent measurement oracle for every closed form.
//! - [`polygon`]: cyclic/tangential polygon types and their closed-form
//!   perimeter, interior angles and area.
//! - [`bounds`]: evaluators for the single- and multi-polygon bounds with
//!   their admissibility guards.
//! - [`optimize`]: sum-constrained separable optimisation, finite-difference
//!   convexity certificates, grid oracles and randomized theorem checks.
//! - [`battery`]: the acceptance battery rendered by the `report` command.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod battery;
pub mod bounds;
pub mod error;
pub mod hmodel;
pub mod hypmath;
pub mod optimize;
pub mod polygon;
pub mod sampling;
pub mod tol;

pub use error::{Error, Result};
