//! Library surface of the command-line runner, exposed so integration tests
//! can drive configurations in-process.

pub mod config;
pub mod instance;
pub mod laws;
pub mod suite;
