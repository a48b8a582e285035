pub mod biseries;
pub mod cache;
pub mod coeff;
pub mod commands;
pub mod config;
pub mod conjectures;
pub mod emit;
pub mod error;
pub mod invariant;
pub mod manin;
pub mod partition;
pub mod plethysm;
pub mod recursion;
pub mod symfun;
pub mod trees;

pub use error::{Error, Result};
