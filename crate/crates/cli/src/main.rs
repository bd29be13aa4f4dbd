use std::process::ExitCode;

use clap::Parser;

use delone_cli::report::write_atomic;
use delone_cli::{run, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("delone: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match run(&cli, &argv[1..]) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("delone: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = outcome.report.to_json();
    match &cli.report {
        Some(path) => {
            if let Err(e) = write_atomic(path, text.as_bytes()) {
                eprintln!("delone: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        }
        None => print!("{text}"),
    }
    for w in &outcome.report.warnings {
        eprintln!("delone: warning: {w}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
