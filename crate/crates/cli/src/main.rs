mod args;
mod commands;
mod output;

use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::output::Output;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("pslsearch: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };

    let stdout = io::stdout();
    let mut out = Output::new(cli.format, BufWriter::new(stdout.lock()));
    let result = commands::run(&cli.command, &mut out);
    let flushed = out.finish();
    match result.map_err(|e| e.to_string()).and_then(|()| flushed.map_err(|e| e.to_string())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            let line = message.lines().next().unwrap_or("failed");
            eprintln!("pslsearch: {line}");
            ExitCode::FAILURE
        }
    }
}
