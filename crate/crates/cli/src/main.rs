use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ssdiv_cli::Cli::parse();
    match ssdiv_cli::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
