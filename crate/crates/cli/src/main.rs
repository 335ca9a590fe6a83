mod args;
mod commands;
mod config;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::Output;

/// Invalid invocation detected after argument parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Outcome of a run that produced its outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// An asserted tolerance was not met.
    Violation,
}

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<hchit::Error>() {
            return match e {
                hchit::Error::Domain(_) | hchit::Error::Parse(_) => EXIT_USAGE,
                hchit::Error::Resource { .. } => EXIT_RESOURCE,
            };
        }
        if cause.is::<std::io::Error>() {
            return EXIT_RESOURCE;
        }
    }
    EXIT_VIOLATION
}

fn dispatch(cli: &Cli, out: &mut Output) -> anyhow::Result<Status> {
    let seed = cli.global.seed;
    match &cli.command {
        Command::Xi(a) => commands::xi(a, out),
        Command::Laplace(a) => commands::laplace(a, out),
        Command::Survival(a) => commands::survival(a, out),
        Command::InclExcl(a) => commands::incl_excl(a, out),
        Command::HitMc(a) => commands::hit_mc(a, seed, out),
        Command::MakeSet(a) => commands::make_set(a, seed, out),
        Command::Check(a) => commands::check(a, seed, out),
        Command::Rem(a) => commands::rem(a, seed, out),
        Command::Asl(a) => commands::asl_cmd(a, out),
        Command::Preset(a) => presets::run(a, seed, out),
    }
}

fn fail(err: &anyhow::Error) -> ExitCode {
    eprintln!("error: {err:#}");
    ExitCode::from(exit_code(err))
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(argv) => argv,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            return fail(&UsageError("--threads must be positive".into()).into());
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            return fail(&anyhow::anyhow!(e));
        }
    }
    let dir = match &cli.command {
        Command::Preset(_) => Some(cli.global.out.clone().unwrap_or_else(|| PathBuf::from("."))),
        _ => cli.global.out.clone(),
    };
    let mut out = Output::new(cli.global.format, dir);
    match dispatch(&cli, &mut out) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(EXIT_VIOLATION),
        Err(e) => {
            out.discard();
            fail(&e)
        }
    }
}
