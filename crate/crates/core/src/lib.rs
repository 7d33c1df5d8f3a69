//! Optimal gapped alignment of random sequences under symmetric scoring
//! functions, the convex set of rescaled bi-scores, and seeded Monte Carlo
//! studies of its concentration and curvature.

pub mod alignment;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod io;
pub mod scoring;

pub use error::{Error, Result};
