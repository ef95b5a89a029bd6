//! `ihplab`: batch runner for the implicit hidden partition laboratory.

mod args;
mod commands;
mod output;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;

const THREADS_ENV: &str = "IHPLAB_THREADS";

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("ihplab: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("ihplab: {THREADS_ENV} must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    let result = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Advantage(a) => commands::advantage(a),
        Command::Gap(a) => commands::gap(a),
        Command::Audit(a) => commands::audit(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Potential(a) => commands::potential(a),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("ihplab: {e}");
            return ExitCode::from(2);
        }
    };
    let format = cli.format.unwrap_or(cli.command.default_format());
    if cli.plot && (cli.out.is_none() || format != output::Format::Csv) {
        eprintln!("ihplab: --plot needs --out and CSV output");
        return ExitCode::from(2);
    }
    if let Err(e) = output::write(&out, format, cli.out.as_deref(), cli.plot) {
        eprintln!("ihplab: {e}");
        return ExitCode::from(2);
    }
    if out.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("ihplab: {}: a check failed", out.command);
        ExitCode::from(1)
    }
}
