//! `kinetic`: runs one verification or computation workflow described by an
//! INI configuration and writes its artifacts plus a manifest.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "kinetic", version, about = "Kinetic collision operator verification toolkit")]
struct Args {
    /// INI configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomized sweeps; overrides [run] seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn write_manifest(out: &Path, manifest: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(manifest).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(out.join("manifest.json"), text + "\n")?;
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let cfg = match RunConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let seed = match args.seed.map(Ok).unwrap_or_else(|| cfg.get_or("run", "seed", 0u64)) {
        Ok(seed) => seed,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        eprintln!("error: cannot create {}: {e}", args.out.display());
        return ExitCode::from(1);
    }
    let result = commands::run(&cfg, seed, &args.out);
    let (status, code, artifacts, summary) = match &result {
        Ok(o) => ("ok".to_string(), 0, o.artifacts.clone(), o.summary.clone()),
        Err(e) => (e.to_string(), e.exit_code(), Vec::new(), json!(null)),
    };
    let manifest = json!({
        "command": cfg.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg.echo(),
        "seed": seed,
        "threads": rayon::current_num_threads(),
        "status": status,
        "exit_code": code,
        "artifacts": artifacts,
        "summary": summary,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    if let Err(e) = write_manifest(&args.out, &manifest) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code as u8)
        }
    }
}
