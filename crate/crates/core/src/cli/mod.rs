//! Scenario ingestion, element expressions, command dispatch and the
//! verification suites behind `heightlab verify`.

pub mod commands;
pub mod corpus;
pub mod expr;
pub mod scenario;
pub mod verify;

pub use commands::{run_command, Command, CommandArgs};
pub use corpus::{bundled_corpus, bundled_scenario};
pub use scenario::{parse_scenario, CheckSpec, Scenario, Suite};
pub use verify::{run_check, run_suite_on, SuiteReport, VerifyOptions};
