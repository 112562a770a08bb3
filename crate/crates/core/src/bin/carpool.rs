use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use carpool::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = match execute(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("carpool: {e}");
            ExitCode::from(e.exit_code())
        }
    };
    let _ = out.flush();
    status
}
