//! Exact rational-coefficient univariate certificates for the minimum of a
//! polynomial over a basic closed semialgebraic set, with the companion
//! degree, magnitude and separation bounds.

pub mod bounds;
pub mod elimination;
pub mod error;
pub mod interval;
pub mod linalg;
pub mod oracle;
pub mod perturb;
pub mod pipeline;
pub mod polycore;
pub mod univariate;

pub use error::{Error, Result};
