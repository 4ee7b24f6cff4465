use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    match modem_lab::cli::run(modem_lab::cli::Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
