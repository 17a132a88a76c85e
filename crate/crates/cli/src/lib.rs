//! Configuration-driven runner for the aiprod model.

pub mod config;
pub mod io;
pub mod verbs;

/// Worker count for the rayon pool.
pub const WORKERS_ENV: &str = "AIPROD_WORKERS";
