//! Command-line driver: loads scenarios, dispatches to `pbe-core` and
//! writes CSV/JSON artifacts.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

pub use commands::{run, Cli};
pub use error::{CliError, ParseError};
pub use scenario::{load_scenario, Scenario};
