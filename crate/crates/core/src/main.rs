use std::process::ExitCode;

use amlshacl::cli::{Cli, Command};
use amlshacl::{run, EXIT_ERROR, REPORT_TXT};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Validate(args) = cli.command;
    let cfg = match args.to_run_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            for d in &outcome.diagnostics {
                eprintln!("warning: {d}");
            }
            if outcome.report.is_some() {
                if let Ok(table) = std::fs::read_to_string(cfg.out_dir.join(REPORT_TXT)) {
                    print!("{table}");
                }
            }
            for p in &outcome.written {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
