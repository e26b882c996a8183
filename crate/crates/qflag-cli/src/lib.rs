//! Support code for the `qflag` binary: argument parsing helpers and the
//! batch verification harness.

pub mod setlit;
pub mod verify;
