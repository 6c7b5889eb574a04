pub mod bases;
mod cache;
pub mod cli;
pub mod collision;
pub mod dynamics;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod oracle;
pub mod specfun;

pub use error::{Error, Result};
