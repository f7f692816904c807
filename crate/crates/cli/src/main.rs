use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

mod args;
mod config;
mod run;

use args::Cli;
use run::{Failure, EXIT_VALIDATION};

fn loosen(cmd: clap::Command) -> clap::Command {
    cmd.ignore_errors(true).mut_subcommands(loosen)
}

fn parse(argv: &[OsString]) -> Result<Cli, clap::Error> {
    let mut cmd = Cli::command();
    cmd.build();
    // First pass only locates --config; required flags may still come from it.
    let loose = loosen(cmd.clone()).try_get_matches_from(argv)?;
    let Some(path) = config::config_path(&loose) else {
        return Cli::from_arg_matches(&cmd.try_get_matches_from(argv)?);
    };
    let merged = config::read(&path)
        .and_then(|entries| config::merge(&cmd, &loose, argv, &entries))
        .map_err(|msg| cmd.error(clap::error::ErrorKind::ValueValidation, msg))?;
    Cli::from_arg_matches(&cmd.try_get_matches_from(merged)?)
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    }
    match run::execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
