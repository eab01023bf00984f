//! Problem files, seeded problem generation, trace CSVs and run reports.

mod generate;
mod problem_file;
mod report;
pub mod rng;
mod trace;

pub use generate::{generate_problem, Distribution, GeneratorSpec};
pub use problem_file::{format_problem, load_problem, parse_problem, write_problem, ProblemFileHeader};
pub use report::MethodReport;
pub use rng::SplitMix64;
pub use trace::{format_trace, parse_trace, read_trace, write_trace, TRACE_HEADER};
