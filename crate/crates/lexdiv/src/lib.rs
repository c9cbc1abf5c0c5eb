//! File formats, persistence and the command-line front end over `lexdiv-core`.

pub mod cli;
pub mod config;
pub mod entities;
pub mod export;
pub mod io;
pub mod partitions;
pub mod stem;
pub mod table;

pub use lexdiv_core as core;
