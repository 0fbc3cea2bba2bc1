//! Locally constrained curvature flow of h-convex curves in the hyperbolic plane,
//! with numerical checks of the associated quermassintegral inequalities.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ball;
pub mod cli;
pub mod curve;
pub mod error;
pub mod flow;
pub mod io;
pub mod quermass;
pub mod spectral;
pub mod symfunc;

pub use error::{Error, Result};
