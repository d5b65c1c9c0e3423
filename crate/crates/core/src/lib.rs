//! Upper bounds on the maximum-likelihood decoding error probability of
//! binary linear block codes and code ensembles over memoryless
//! binary-input output-symmetric channels.
//!
//! The crate covers the union bound, the Shulman–Feder bound (SFB) and its
//! modified form (MSFB), a simplified second Duman–Salehi bound, the
//! tangential-sphere bound (TSB), partition-based combinations of these,
//! spectrum expurgation, and an exhaustive ML Monte Carlo oracle.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod expurgation;
pub mod simulator;
pub mod spectrum;
pub mod numerics;

pub use error::{Error, Result};
