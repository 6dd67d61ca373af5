use std::process::ExitCode;

use clap::Parser;
use skt_polar::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serialises"));
            if !outcome.summary.is_empty() {
                eprintln!("{}", outcome.summary);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("skt-polar: {e}");
            ExitCode::from(2)
        }
    }
}
