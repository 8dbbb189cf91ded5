//! Command-line front end: argument parsing, configuration resolution and
//! reproducible CSV output on top of `lrtrap`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
pub use error::CliError;

/// Runs one invocation and returns the process exit code: 0 on success, 2
/// for usage errors, 3 for numerical failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("lrtrap: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command) -> Result<Vec<std::path::PathBuf>, CliError> {
    match command {
        Command::Spectrum {
            chain,
            common,
            kind,
            ordering,
        } => commands::spectrum(chain, common, *kind, *ordering),
        Command::Decay { chain, common, grid } => commands::decay(chain, common, grid),
        Command::Perturb {
            chain,
            common,
            paper_literal_diag,
        } => commands::perturb(chain, common, *paper_literal_diag),
        Command::Fit {
            input,
            common,
            window,
        } => commands::fit(input, common, window),
        Command::Figure {
            id,
            common,
            grid,
            jobs,
        } => commands::figure(id, common, grid, *jobs),
        Command::Sweep {
            n,
            traps,
            nus,
            gammas,
            jobs,
            common,
            window,
        } => commands::sweep(
            *n,
            traps.as_deref(),
            nus.as_deref(),
            gammas.as_deref(),
            *jobs,
            common,
            window,
        ),
    }
}
