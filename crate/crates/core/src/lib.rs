pub mod acceptance;
pub mod bounds;
pub mod codes;
pub mod curve;
pub mod error;
pub mod ff;
pub mod gaps;
pub mod linalg;
pub mod poly;
pub mod rrspace;
pub mod witness7;

pub use error::{Error, Result};
