//! Map generation, instance sampling, benchmarking and verification.

pub mod bench;
pub mod gen;
pub mod instances;
pub mod verify;

pub use bench::{read_csv, run_bench, summarize, write_csv, BenchRecord, BenchSummary};
pub use gen::{generate, GenKind, GenSpec};
pub use instances::{components, sample_instances, sample_instances_with, Instance};
pub use verify::{verify, Mismatch, VerifyReport};
