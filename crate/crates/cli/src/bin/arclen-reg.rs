use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match arclen_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors count as input errors; clap would exit with 2
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match arclen_cli::run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
