//! Dependent randomized rounding and its two classic applications.
//!
//! The crate is organised bottom-up:
//!
//! * [`rounding`] generates randomized roundings of fractional vectors that keep
//!   disjoint cardinality constraints exact (tree-based and bit-wise schemes),
//!   derandomizes them against an [`rounding::Estimator`], and provides the
//!   budget-preserving and gradient-guided pair roundings used for max-coverage.
//! * [`lp`] is a small dense bounded-variable simplex with a branch-and-bound
//!   driver and LP-file export.
//! * [`routing`] builds the low-congestion routing programs on bidirected grids,
//!   strips paths out of fractional flows and rounds them.
//! * [`maxcov`] holds the max-coverage solvers: greedy, LP relaxation with three
//!   rounding modes, budget enforcement and the greedy/LP hybrid.
//! * [`ptas`] is the shifted-grid approximation scheme for unit-disk max-domination.
//! * [`instances`] generates and converts benchmark instances.
//!
//! All randomness flows through [`rng::StdRng`] seeded from 64-bit seeds, so any
//! run is reproducible from its seed.

pub mod instances;
pub mod lp;
pub mod maxcov;
pub mod ptas;
pub mod rng;
pub mod rounding;
pub mod routing;
