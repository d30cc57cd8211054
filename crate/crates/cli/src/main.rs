use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qd_cli::{run, Cli, CliError};

/// Exit status when a checked invariant fails.
const INVARIANT_FAILURE: u8 = 3;

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim_end().to_string())),
    };
    let cfg = match cli.into_config() {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(&cfg) {
        Ok(out) => {
            println!("{}", out.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join("\n"));
            if out.ok() || cfg.report_only {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", serde_json::json!({ "error": "InvariantFailure", "failures": out.failures }));
                ExitCode::from(INVARIANT_FAILURE)
            }
        }
        Err(e) => fail(&e),
    }
}
