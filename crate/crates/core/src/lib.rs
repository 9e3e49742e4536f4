//! Static warped-product manifolds and numerical checks of their geometric
//! inequalities, mass asymptotics, inverse mean curvature flow and horizon
//! Poisson problem.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod horizon_killing;
pub mod hypersurfaces;
pub mod imcf;
pub mod inequality;
pub mod models;
pub mod numerics;

pub use error::{GeomError, Result};
