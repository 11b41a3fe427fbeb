use std::process::ExitCode;

use clap::Parser;
use kronecker_cli::cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
