//! Solver and verification workbench for central configurations of n bodies
//! in dimension n - 2 under power-law interactions, built on Dziobek's
//! coordinate calculus.
//!
//! A configuration of n point masses is *central* when every acceleration
//! term points at the barycenter with one common factor:
//! `gamma_i = lambda (q_i - q_G)`. In dimension n - 2 (planar four bodies,
//! spatial five bodies) the configuration carries homogeneous barycentric
//! coordinates `Delta_1..Delta_n`, and after scaling to `lambda = M` the
//! whole problem collapses onto those n numbers: distances come from
//! `s_ij = (1 - Delta_i Delta_j / (m_i m_j))^(1/a)` and centrality becomes
//! the equal-sums condition `t_1 = ... = t_n` with
//! `t_i = sum_j Delta_j s_ij`.
//!
//! The crate provides:
//!
//! * [`geometry`] — distances, signed volumes, barycentric rays,
//!   Cayley-Menger realizability tests, and distance-matrix embedding;
//! * [`delta`] — the coordinate calculus: the coordinate-to-distance map,
//!   the equal-sums residuals, the (lambda/M, mu) fit, and validation;
//! * [`solver`] — the damped-Newton multi-start solver over coordinates,
//!   with spurious-root rejection;
//! * [`direct`] — position-space evaluation and an independent multi-start
//!   oracle solver;
//! * [`lemmas`] — the scalar inequality suites (the two-term gap, the
//!   trinomial bound, pair-product ordering, the t-gap bound) with
//!   sampling-plus-minimizer certification;
//! * [`analysis`] — symmetry and ordering reports, Routh's quadrilateral
//!   relation, the product identity, and convexity classification;
//! * [`sweep`] — deterministic mass-grid batch runs with CSV output;
//! * [`io`] — the JSON file schemas.
//!
//! Start with the examples: `solve_square` for the basic flow,
//! `position_oracle` for the cross-check between the two solvers, and
//! `lemma_sampling` for the inequality suites. The `dziobek` binary exposes
//! the same flows as subcommands (`solve`, `verify`, `sweep`, `propcheck`,
//! `embed`).

pub mod analysis;
pub mod delta;
pub mod direct;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lemmas;
pub mod solver;
pub mod sweep;

pub use delta::{CCSolution, DziobekCoords, Exponent, Residuals, Tolerances};
pub use error::{Error, Result};
pub use geometry::{Configuration, MassVector, OrientedVolumes, SquaredDistanceMatrix};
pub use solver::{solve_all, solve_normalized, SignPattern, SolveOutcome, SolverOptions};
