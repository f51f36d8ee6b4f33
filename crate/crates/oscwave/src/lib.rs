//! Verification harness and batch front-end for `oscwave-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod verify;

pub use error::{Error, Result};
