use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ls_discrepancy_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code as u8);
        }
    };
    let written = match &out.path {
        Some(path) => std::fs::write(path, &out.body),
        None => std::io::stdout().lock().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    for note in &out.notes {
        eprintln!("{note}");
    }
    ExitCode::SUCCESS
}
