//! Graded differential polynomial ring in propagators, Kähler connection and
//! n-point symbols.

pub mod element;
pub mod generator;
pub mod hat;
pub mod table;

pub use element::{RingElement, TermKey};
pub use generator::{Generator, Idx, Monomial, TensorType};
pub use hat::{hat, k_expand, unhat};
pub use table::{DerivationTable, LiftData, TableKind};
