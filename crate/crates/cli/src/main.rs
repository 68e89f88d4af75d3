mod args;
mod cache;
mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use cache::Cache;
use commands::{Env, Output, SpaceArgs, VerifyArgs};
use config::Config;
use error::CliResult;

/// `$XDG_CACHE_HOME/hankel`, else `$HOME/.cache/hankel`, else `./.hankel-cache`.
fn default_cache_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(x).join("hankel");
    }
    if let Some(h) = std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(h).join(".cache").join("hankel");
    }
    PathBuf::from(".hankel-cache")
}

fn run(cli: Cli) -> CliResult<Output> {
    let g = cli.global;
    let config = match &g.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(n) = g.jobs.or(config.jobs) {
        // fails only if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let needs_cache = matches!(cli.command, Command::Compute { .. } | Command::Decompose { .. } | Command::Cache { .. });
    let cache = if g.no_cache || !needs_cache {
        None
    } else {
        let dir = g.cache_dir.clone().or_else(|| config.cache_dir.clone()).unwrap_or_else(default_cache_dir);
        Some(Cache::open(&dir)?)
    };
    let env = Env { config, format: g.format, cache };
    match cli.command {
        Command::Compute { form, field, prec } => commands::compute(&env, &form, &field, prec),
        Command::Verify { suite, q, prec, kmax, jmax, samples, random_series, seed, golden_dir } => {
            commands::verify(&env, VerifyArgs { suite, q, prec, kmax, jmax, samples, random_series, seed, golden_dir })
        }
        Command::Decompose { form, field, w, m, l, prec } => {
            commands::decompose(&env, &form, &field, SpaceArgs { w, m, l, prec })
        }
        Command::Extremal { field, w, m, l, prec } => commands::extremal(&env, &field, w, m, l, prec),
        Command::Cache { action } => commands::cache(&env, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.global.out.clone();
    let output = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &out_path {
        Some(path) => std::fs::write(path, &output.text),
        None => std::io::stdout().write_all(output.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    if !output.ok {
        if let Some(path) = &out_path {
            eprintln!("verification failed; report written to {}", path.display());
        }
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
