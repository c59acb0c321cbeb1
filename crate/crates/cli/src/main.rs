use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use qexpand_cli::cli::Cli;
use qexpand_cli::commands::{run, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(&cli) {
        Ok(outcome) => {
            if let Outcome::Partial(summary) = &outcome {
                eprintln!("{summary}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            let causes: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            eprintln!(
                "{}",
                json!({ "command": cli.command.name(), "error": e.to_string(), "causes": causes })
            );
            ExitCode::from(1)
        }
    }
}
