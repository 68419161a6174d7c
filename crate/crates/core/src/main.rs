use std::process::ExitCode;

use clap::Parser;
use gcoalg::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.config.json {
                println!("{}", serde_json::to_string_pretty(&out.doc).expect("documents serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.config.json {
                println!("{}", serde_json::json!({ "error": e.to_string(), "exit": exit_code(&e) }));
            }
            eprintln!("gcoalg: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
