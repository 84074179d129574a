//! Poincaré–Reeb digraphs of regions cut out by circle-cylinders.
//!
//! A region in ℝ^k is given as an intersection of cylinders over circles
//! lying in coordinate planes `(x₁, x_m)`. Sweeping along `x₁`, the level
//! set of the closure at each value is a product of one-dimensional slices,
//! which makes its connected components exactly computable. The crate builds
//! the leveled digraph of those components, synthesizes arrangements whose
//! digraph is a prescribed balanced-tree shape, and validates the result.

pub mod arrangement;
pub mod digraph;
pub mod numeric;
pub mod sweep;
pub mod synthesis;
pub mod validate;
