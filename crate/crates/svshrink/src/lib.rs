//! Dense-matrix front end for singular value shrinkage under general
//! contamination: sampling, SVD-based denoising, parameter estimation,
//! Monte Carlo experiments and report formats.

mod error;

pub mod contaminate;
pub mod denoise;
pub mod estimate;
pub mod io;
pub mod linalg;
pub mod report;
pub mod sim;

pub use error::{Error, Result};
pub use svshrink_core as core;
