pub mod cli;
pub mod equidistribution;
pub mod error;
pub mod finite_group;
pub mod frobenius;
pub mod haar_moments;
pub mod rng;
pub mod st_group;

pub use error::{Error, Result};
