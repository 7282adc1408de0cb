//! Batch front end for `ito-hopf`: problem files, commands and reports.

pub mod commands;
pub mod problem;
pub mod report;
