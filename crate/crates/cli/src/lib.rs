//! Library surface of the `coopnet` command-line tool: scenario config
//! parsing, the analyze/sweep/verify runners, and the CSV/JSON emitters.

pub mod config;
pub mod emit;
pub mod run;
