//! Bound catalogue, verdicts, random surfaces and batch runs.

pub mod bounds;
pub mod john;
pub mod random;
pub mod report;
pub mod suite;
pub mod table;

pub use bounds::{fm_bound, parse_bounds, BoundId};
pub use john::{john_field, john_lower_bound_check, JohnReport};
pub use random::random_surface;
pub use report::{check, verdict, CheckOptions, InvariantReport, LevelInvariants, Measured, Status, Verdict};
pub use suite::{run_suite, SuiteEntry, SuiteOptions, SuiteReport};
pub use table::{criterion_rows, reproduce_table, to_csv, TableRow, TableScale, CRITERIA};
