pub mod cli;
pub mod error;
pub mod integrators;
pub mod qmath;
pub mod residuals;
pub mod solutions;

pub use error::{Error, Result};
