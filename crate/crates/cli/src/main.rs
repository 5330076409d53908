mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use frobsoc::quotient::Budget;

use args::Cli;
use commands::{run, Ctx};
use report::matches_golden;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        budget: cli.output.memory_budget.map(Budget::from_megabytes).unwrap_or_default(),
        jobs: cli.output.jobs,
        verbose: cli.output.verbose,
    };
    let outcome = match run(&ctx, &cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = outcome.report.render(cli.output.format);
    let written = match &cli.output.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    // Human output on stdout already lists them.
    if cli.output.format != args::Format::Human || cli.output.output.is_some() {
        for w in &outcome.report.warnings {
            eprintln!("warning: {w}");
        }
    }
    if let Some(golden) = &cli.output.check {
        let expected = match std::fs::read_to_string(golden) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", golden.display());
                return ExitCode::from(1);
            }
        };
        if !matches_golden(&text, &expected, cli.output.format) {
            eprintln!("golden mismatch against {}", golden.display());
            return ExitCode::from(2);
        }
    }
    if outcome.exhausted {
        return ExitCode::from(3);
    }
    if !outcome.report.ok {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
