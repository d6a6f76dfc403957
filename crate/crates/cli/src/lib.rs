//! Command-line front end: text file formats, argument handling and the
//! subcommands of the `sure-svt` binary.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod grid;
pub mod verify;

use std::io::Write;

pub use args::Cli;
pub use error::{CliError, CliResult};

use args::Command;

/// Environment variable capping worker threads; `0` or unset means automatic.
pub const THREADS_ENV: &str = "SURE_SVT_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`].
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got '{raw}'")))?;
    if n > 0 {
        // A pool that already exists (e.g. in tests) is left as is.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs one parsed command.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => commands::cmd_gen(a, stdout),
        Command::Svd(a) => commands::cmd_svd(a, stdout),
        Command::Sweep(a) => commands::cmd_sweep(a, stdout),
        Command::Select(a) => commands::cmd_select(a, stdout),
        Command::Denoise(a) => commands::cmd_denoise(a, stdout, stderr),
        Command::Verify(a) => verify::run_verify(a, stdout),
    }
}
