//! Problem files, reports and the command line.

pub mod cli;
mod parse;
mod print;
pub mod report;

pub use parse::{parse_problem, ParseError};
pub use print::{constraint_text, print_problem};
