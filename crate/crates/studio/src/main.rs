use std::io;
use std::process::ExitCode;

use clap::Parser;
use studio::cli::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    ExitCode::from(run(cli, &mut io::stdout(), &mut io::stderr()))
}
