//! File formats, parallel drivers and the command line on top of
//! [`evinf_core`].

pub mod cli;
pub mod formats;
pub mod parallel;

pub use evinf_core as core;
