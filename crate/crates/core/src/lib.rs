//! Exact differential geometry on finite wedges of Euclidean spaces.
//!
//! The spaces handled here are finitely many copies of `R^n` glued at
//! finitely many single points. On that class every construction is finite:
//! forms are tuples of per-piece forms, fibres of the pseudo-bundles of
//! forms are direct sums over the pieces meeting a point, and de Rham
//! cohomology reduces to exact rank computations over polynomial forms.
//!
//! Module map:
//!
//! - [`scalar_expr`]: exact coefficients, `Q[x] * exp(Q[x])`
//! - [`exterior`], [`clifford`]: fibre algebra
//! - [`space`]: glued spaces and their points
//! - [`forms`]: forms on glued spaces and the fibres of `Lambda^k`
//! - [`cohomology`]: polynomial de Rham complex and the Koszul homotopy
//! - [`metric`]: pseudo-metrics, Christoffel symbols, Levi-Civita checks
//! - [`derham`]: the operator `D = c o nabla`
//! - [`counterexamples`]: witnesses of classical constructions failing on wedges
//! - [`spacefile`], [`report`], [`cli`]: the command line surface

pub mod cli;
pub mod clifford;
pub mod cohomology;
pub mod counterexamples;
pub mod derham;
pub mod error;
pub mod exterior;
pub mod forms;
pub mod linalg;
pub mod metric;
pub mod report;
pub mod scalar_expr;
pub mod space;
pub mod spacefile;

pub use error::{Error, Result};
