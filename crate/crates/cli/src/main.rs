use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kneser_lab_cli::{exit_code_for, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| Ok((out.render(cli.global.csv)?, out))) {
        Ok((text, out)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            for v in &out.violations {
                eprintln!("violated: {v}");
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
