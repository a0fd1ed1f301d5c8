//! `bsl`: command-line front end for exact bispectral computations.
//!
//! Exit status is 0 on success, 2 when a checked identity fails and 1 on any
//! error; errors are reported on stderr as `{"error": CODE, "message": ...}`.

mod args;
mod commands;
mod output;

use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::{Failure, Verdict};
use output::Emitter;

fn report(failure: &Failure) -> ExitCode {
    eprintln!("{}", json!({ "error": failure.code(), "message": failure.to_string() }));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(&Failure::Usage(e.render().to_string().trim_end().to_string())),
    };
    if cli.workers == 0 {
        return report(&Failure::Usage("--workers must be at least 1".into()));
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
        return report(&Failure::Io(e.to_string()));
    }

    let stdout = io::stdout();
    let mut out = Emitter::new(cli.format, stdout.lock());
    let outcome = commands::run(&cli.command, cli.workers, &mut out);
    let finished = out.finish();
    match (outcome, finished) {
        (Err(f), _) => report(&f),
        (Ok(_), Err(e)) => report(&Failure::from(e)),
        (Ok(Verdict::Held), Ok(())) => ExitCode::SUCCESS,
        (Ok(Verdict::Violated), Ok(())) => ExitCode::from(2),
    }
}
