//! Simulation and verification toolkit for uniform mixtures of n-fold
//! Bell-state copies: state constructions, exact relative-entropy bounds,
//! separability evidence, and the two-copy LOCC discrimination and
//! distillation protocol.

pub mod bell;
pub mod error;
pub mod locc;
pub mod measures;
pub mod quantum;

pub use error::{Error, Result};
