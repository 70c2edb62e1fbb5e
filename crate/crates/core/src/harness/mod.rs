//! Scenario configs, report directories and the verification suite.

mod expr;
mod report;
mod scenario;
mod suite;

pub use expr::ComplexExpr;
pub use report::{
    cells_csv, checks_csv, read_report_dir, summary_text, thresholds_csv, verdict_table,
    write_report_dir, Verdict, VerdictRow,
};
pub use scenario::{check_id, run, Budget, Expectation, ExtraChecks, RunReport, Scenario};
pub use suite::{verify_suite, SuiteBudget, SuiteReport};
