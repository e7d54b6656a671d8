//! Command-line front end, output formats and Monte Carlo simulation for
//! [`tazrp_core`].

pub mod cli;
pub mod output;
pub mod simulate;

pub use tazrp_core;
