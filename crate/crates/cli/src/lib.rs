//! Command-line front end for the `qlur` entanglement toolkit.
//!
//! Every verb is also callable as a library function returning typed
//! results, which is how the test suites drive it.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod states;

pub use args::{Cli, Command};
pub use error::{CliError, EXIT_INCOMPLETE, EXIT_INPUT};

use commands::{counts_csv, to_json};

/// Runs one parsed invocation and returns the text to emit.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    Ok(match &cli.command {
        Command::Analyze(a) => to_json(&commands::analyze(a)?),
        Command::Simulate(a) => counts_csv(&commands::simulate(a)?),
        Command::SweepG(a) => commands::sweep_g_csv(&commands::sweep_g(a)?),
        Command::SweepK(a) => commands::sweep_k_csv(&commands::sweep_k(a)?),
        Command::IlutCheck(a) => to_json(&commands::ilut_check(a)?),
        Command::Tomo(a) => to_json(&commands::tomo(a)?),
    })
}
