//! File formats, corpus generation, the check registry and reporting for
//! [`medalg_core`]. The `medalg` binary is a thin layer over this crate.

pub mod checks;
pub mod corpus;
pub mod error;
pub mod examples;
pub mod io;
pub mod oracle;
pub mod report;

pub use error::HarnessError;
