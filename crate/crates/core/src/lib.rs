//! Numerical approximation of Clarke subdifferentials by gradient sampling.
//!
//! For an extended-real-valued, directionally Lipschitzian function `f` and
//! a point `x̄` in its domain, the Clarke subdifferential is the closure of
//! `conv(limits of gradients) + cone(horizon limits) + N_dom f(x̄)`. This
//! crate samples gradients in a ball around `x̄`, assembles the trial sets
//! `D_k = conv{∇f(xᵢ)} + cone(horizon directions ∪ normals)`, and answers
//! distance and stationarity queries against them.
//!
//! Modules:
//! - [`convex`]: min-norm points, distances, support values and cone tests
//!   for sets of the form `conv(E) + cone(G)`.
//! - [`function`]: the oracle interface and a catalog of worked examples.
//! - [`sampler`]: the gradient-sampling estimator.
//! - [`epigraph`]: projections onto epigraphs and proximal-normal traces.
//! - [`density`]: Monte-Carlo lower-density curves of domains.
//! - [`report`]: JSON/CSV run reports and command-line value parsing.
//! - [`verify`]: the fixed-seed acceptance suite.
//! - [`oracles`]: independent brute-force checks used by tests and `verify`.

pub mod convex;
pub mod density;
pub mod epigraph;
pub mod error;
pub mod function;
pub mod oracles;
pub mod parallel;
pub mod report;
pub mod rng;
pub mod sampler;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use vector::Vector;
