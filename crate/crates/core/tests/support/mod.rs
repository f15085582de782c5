//! Shared by the core integration tests and the workspace acceptance suite.
#![allow(dead_code)]

pub mod oracle;
pub mod worlds;
