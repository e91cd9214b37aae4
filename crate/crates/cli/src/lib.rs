//! Command-line front end, JSON documents and the acceptance suite for
//! `velojet`.

pub mod checks;
pub mod doc;
pub mod error;
pub mod oracle;
pub mod random;
pub mod wire;
