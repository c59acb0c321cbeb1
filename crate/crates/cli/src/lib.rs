//! Experiment driver for web-knowledge query expansion: configuration,
//! per-topic pipeline steps, parameter sweeps and the `qexpand` commands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod pipeline;
pub mod sweep;
