use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use flowcont_cli::{run, Cli, CommandResult};

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let result = match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit();
        }
        Err(e) if json => CommandResult::error(e.kind().to_string() + ": " + &e.to_string()),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    if json {
        println!("{}", result.to_json());
    } else if result.exit_code() == 3 {
        eprintln!("error: {}", result.text);
    } else {
        println!("{}", result.text);
    }
    ExitCode::from(result.exit_code() as u8)
}
