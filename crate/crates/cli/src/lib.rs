//! Library half of the `bvcalc` command: the expression parser, the
//! property suites and their JSON reports.

pub mod eval;
pub mod parse;
pub mod report;
pub mod suites;
