//! Text formats, verification suites and the command-line front end for
//! `punctured-core`.

pub mod cli;
pub mod parse;
pub mod verify;
