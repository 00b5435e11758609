//! Executable categorical set theory at finite scale.
//!
//! - [`cat`]: finite sets as a positive Heyting category, plus a generic
//!   interface other instances implement.
//! - [`classes`]: classes of small and display maps and their axiom checkers.
//! - [`exreg`]: the exact completion of the finite-set instance.
//! - [`wtypes`]: polynomial functors, W-types and bisimulation.
//! - [`sets`]: hereditarily finite sets, a formula language and set-theoretic
//!   axiom checks.

pub mod cat;
pub mod classes;
pub mod error;
pub mod exreg;
pub mod sets;
pub mod wtypes;

pub use error::{Error, Result};
