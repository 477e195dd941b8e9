//! Exact symbolic engine for BCOV differential rings.

pub mod error;
pub mod exact;
pub mod modular;
pub mod models;
pub mod picard_fuchs;
pub mod ring;
pub mod solver;

pub use error::{Error, Result};
