pub mod bound;
pub mod classify;
pub mod cli;
pub mod duality;
pub mod error;
pub mod frameops;
pub mod numkernel;
pub mod report;
pub mod sequences;
pub mod specfile;
pub mod truncation;

pub use bound::Bound;
pub use error::{Error, Result, ValidationError};
