//! Radial solver and barrier certifier for the slow-diffusion reaction
//! equation `u_t = Lap(u^m) + u^p` on rotationally symmetric manifolds of
//! nonpositive curvature.
//!
//! The crate is organized around five pieces:
//! - [`geometry`]: model manifolds, radial drift, curvature and the
//!   comparison envelopes implied by curvature bounds;
//! - [`barrier`]: explicit compactly supported profiles, their residuals
//!   and support radii;
//! - [`certify`]: grid-plus-tail verification of the barrier inequalities
//!   and deterministic synthesis of certified barriers;
//! - [`solver`]: an explicit positivity-preserving finite-volume scheme
//!   with free-boundary tracking, blow-up detection, ball exhaustion and
//!   the hyperbolic ground state;
//! - [`harness`]: end-to-end experiment scenarios, parameter sweeps,
//!   file outputs and the configuration format behind the CLI.

pub mod barrier;
pub mod certify;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod solver;
pub mod util;

pub use error::{Error, Result};
