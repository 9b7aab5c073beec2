//! Oracles and fixtures for the workspace's tests. Nothing here is used by
//! the shipped crates; the oracles are written independently of the code
//! they check.

pub mod corpora;
pub mod gen;
pub mod oracle;
pub mod regex_engine;
pub mod suites;
