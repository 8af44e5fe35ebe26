//! Hypergeometric series for 1/pi: high-precision summation, proofs through
//! products of complete elliptic integrals, and PSLQ discovery.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod elliptic;
pub mod hyperseries;
pub mod error;
pub mod factorization;
pub mod numeric;
pub mod rational;
pub mod relations;
pub mod telescope;
pub mod translator;

pub use error::{Error, Result};
