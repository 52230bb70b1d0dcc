use std::io::Write;
use std::process::ExitCode;

use qdeform_cli::{run, Outcome, RunConfig, EXIT_OK, EXIT_USAGE, TOL_ENV};

fn main() -> ExitCode {
    let env_tol = std::env::var(TOL_ENV).ok();
    let (outcome, output_path) = match RunConfig::parse_from(std::env::args_os(), env_tol.as_deref()) {
        Ok(config) => (run(&config), config.output.clone()),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::from(EXIT_OK as u8);
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let Outcome { code, output, diagnostics } = outcome;
    if !output.is_empty() {
        let written = match &output_path {
            Some(path) => std::fs::write(path, output.as_bytes()),
            None => std::io::stdout().lock().write_all(output.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    if !diagnostics.is_empty() {
        eprintln!("{diagnostics}");
    }
    ExitCode::from(code as u8)
}
