use std::process::ExitCode;

use clap::Parser;
use qlur_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let text = match run(&cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(qlur_cli::EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
