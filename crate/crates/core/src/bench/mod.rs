//! Configuration-driven benchmark sweep and reports.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{BenchConfig, CorpusSource, GeneratedCorpus, Preprocess};
pub use report::{format_level, parse_csv, write_report, ReportFormat, CSV_HEADER};
pub use runner::{run_benchmark, run_benchmark_with, CorpusItem, EdgeDetector, ReportRow};
