//! File formats, configuration, model clients and the `gecsynth` command
//! line around [`gecsynth_core`].

pub mod cli;
pub mod config;
pub mod files;
pub mod fixture;
pub mod http;
pub mod report;
pub mod review;
pub mod runner;
