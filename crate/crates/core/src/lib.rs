//! Numerical lab for pseudorandom density matrices.

pub mod channels;
pub mod distinguishers;
pub mod ensembles;
pub mod error;
pub mod monotones;
pub mod pseudostates;
pub mod qcore;
pub mod qmoney;

pub use error::{Error, Result};
