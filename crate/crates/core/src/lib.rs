//! Unit and distinct distances in finite-dimensional normed spaces.
//!
//! Exact rational linear algebra sits underneath everything. On top of it
//! live polytope and smooth norms, unit-distance graphs, point-set
//! constructions with many unit distances, the combinatorial checks that
//! bound them, and sampling of polytope norms with generic offsets.

pub mod constructions;
pub mod deplab;
pub mod distgraph;
pub mod genericity;
pub mod norms;
pub mod qlinalg;
