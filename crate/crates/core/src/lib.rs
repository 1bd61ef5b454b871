//! Exact finite-support channels over multisets, exchangeable coalgebras,
//! and moment-based reconstruction of limiting measures on `[0, 1]`.
//!
//! Every probability is an exact rational. The only floating point code is
//! the real-parameter Beta path in [`beta`].

#![allow(clippy::result_large_err)]

pub mod beta;
pub mod channels;
pub mod cli;
pub mod coalgebra;
pub mod dist;
pub mod error;
pub mod limit;
pub mod multiset;
pub mod par;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
