//! Exact symbolic engine for n-plectic geometry: rational-function arithmetic,
//! exterior calculus on a coordinate chart, graded sign combinatorics, finite
//! L∞ structures, the Lie n-algebra of an n-plectic manifold and homotopy
//! moment maps.

pub mod arith;
pub mod exterior;
pub mod graded;
pub mod linfty;
pub mod moment;
pub mod plectic;
pub mod report;
pub mod sample;
