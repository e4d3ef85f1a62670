//! Spherical contact graph toolkit.
//!
//! Enumerates the contact graphs of locally rigid ("irreducible") packings of
//! equal circles on the unit sphere and computes the extremal quantities that
//! follow from the enumeration: Tammes optima, antipodal Tammes optima, and
//! the maximum/minimum contact counts.
//!
//! The pipeline has three stages:
//!
//! 1. [`graph_gen`] produces candidate combinatorial embeddings: one
//!    representative per isomorphism class of 3-connected simple planar
//!    graphs, optionally annotated with isolated vertices inside large faces.
//! 2. [`embedder`] decides whether a candidate is realizable as an
//!    equal-edge-length contact graph on the sphere, and finds the feasible
//!    range of the edge length.
//! 3. [`rigidity`] classifies realized configurations (irreducible,
//!    D-irreducible, maximal) and [`extremal`] aggregates per-N summaries.

pub mod embedder;
pub mod error;
pub mod extremal;
pub mod graph_gen;
pub mod pipeline;
pub mod record;
pub mod rigidity;
pub mod rng;
pub mod sphere_geom;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
