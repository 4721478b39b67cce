//! Command-line runner and HTTP service around the [`housekeeper`] simulator.

pub mod api;
pub mod cli;
