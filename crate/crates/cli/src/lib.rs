//! Experiment runner library behind the `prdm` binary.

pub mod config;
pub mod experiments;
pub mod output;
