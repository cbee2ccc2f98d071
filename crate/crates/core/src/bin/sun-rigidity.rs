use std::process::ExitCode;

use clap::Parser;
use sun_rigidity::cli::{run, Cli, ExitStatus};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::Usage.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    ExitCode::from(run(&cli).code() as u8)
}
