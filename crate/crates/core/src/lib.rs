//! Sharp constants in maximum principles for elliptic systems in a half-space.
//!
//! * [`constants`] evaluates the closed forms for the Lamé, Stokes,
//!   biharmonic-gradient and planar deformed state problems.
//! * [`oracle`] re-derives them numerically from the Poisson-type kernels in
//!   [`kernels`], both as a supremum of hemisphere integrals and by building
//!   extremal boundary data and integrating the half-space solution.
//! * [`criteria`] decides whether the classical maximum modulus principle
//!   holds for a given second-order strongly elliptic system.
//! * [`cli`] is the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod criteria;
pub mod error;
pub mod kernels;
pub mod numerics;
pub mod oracle;

pub use error::{Error, Result};
