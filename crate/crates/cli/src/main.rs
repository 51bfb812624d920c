use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use arc_widom_cli::{emit, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("arc-widom: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match emit(&report, cli.opts.out.as_ref(), cli.opts.format) {
        Ok(Some(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("arc-widom: {e}");
            return ExitCode::from(e.exit_code());
        }
    }
    if let Some(v) = &report.verdict {
        eprintln!(
            "{}: {} ({}, {:.2} s)",
            report.command,
            if v.pass { "pass" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
