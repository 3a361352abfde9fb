use std::process::ExitCode;

use clap::Parser;
use cpn_cli::{deliver, execute, Cli};

fn main() -> ExitCode {
    // Clap exits with 2 on usage errors and 0 for --help.
    let cli = Cli::parse();
    match execute(&cli).and_then(|outcome| deliver(&cli, &outcome)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cpn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
