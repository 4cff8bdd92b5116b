pub mod adapters;
pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod field;
pub mod rational;
pub mod scheme;

pub use error::{Error, Result};
