pub mod error;
pub mod field;
pub mod fourier;
pub mod frames;
pub mod geometry;
pub mod linalg;
pub mod points;
pub mod tiling;
pub mod tolerance;

pub use error::{Error, ModClass, Result};
