//! Equal-circle packings and penny-graph embeddings on the flat unit square torus.
//!
//! The torus is the quotient of the plane by the integer lattice, with the
//! Euclidean metric and the fundamental domain `[-1/2, 1/2)^2` centered at the
//! origin. Everything here is built on that convention: canonical point
//! representatives, minimal lattice displacements, the 8-element point group
//! of the square semidirect with translations, contact-graph extraction at the
//! packing diameter, and the small-graph machinery (isomorphism, planarity,
//! bipartiteness) needed to identify the contact graphs that arise.
//!
//! Coordinates come in two flavors sharing one implementation: `f64` for
//! numeric work and arbitrary-precision rationals for exact verification of
//! the cataloged configurations.

pub mod catalog;
pub mod graph;
pub mod optimizer;
pub mod packing;
pub mod render;
pub mod scalar;
pub mod torus;

pub use scalar::{Rat, TorusScalar};
pub use torus::{Displacement, TorusError, TorusPoint};
