pub mod cli;
pub mod differentiator;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod redesign;
pub mod scenario;
pub mod sim;
pub mod suites;
pub mod time_scaling;
pub mod verify;

pub use error::{Error, Result};
