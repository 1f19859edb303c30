pub mod analytic;
pub mod boundary;
pub mod config;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod reproduce;
mod serde_util;
pub mod spectral;
pub mod system;
pub mod word;

pub use error::{Error, Result};
