//! Command-line front end and HTTP service for the notakto engine.

pub mod commands;
pub mod dictionary;
pub mod http;
pub mod play;

pub use commands::CmdError;
