//! Command-line front end: a JSON run configuration in, `report.json`
//! (plus `convergence.csv` for homogenization) and a `meta.json` sidecar out.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid configuration,
//! 3 mathematical obstruction, 4 numerical failure.

mod config;
mod report;
mod run;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;

pub use config::{
    parse_config, ArchetypeSpec, BodySpec, BoundarySpec, Command, ConfigError, LoopSpec, MetricSpec, RunConfig,
    Violation,
};
pub use report::*;
pub use run::{
    build_body, build_loop, convergence_csv, execute, exit_code, Artifacts, EXIT_IO, EXIT_NUMERICAL,
    EXIT_OBSTRUCTION, EXIT_OK, EXIT_VALIDATION,
};

#[derive(Debug, Clone, Parser)]
#[command(name = "elastic-defects", version, about = "Defects, holonomy and homogenization of elastic bodies")]
pub struct Args {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Tolerance override `name=value`; may be repeated.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Seed for random sample sets; overrides the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn write(path: &Path, contents: &str) -> Result<(), i32> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_IO
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs one configuration and returns the process exit code.
pub fn run(args: &Args) -> i32 {
    match run_inner(args) {
        Ok(code) | Err(code) => code,
    }
}

fn run_inner(args: &Args) -> Result<i32, i32> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", args.config.display());
        EXIT_IO
    })?;
    let mut config = parse_config(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_VALIDATION
    })?;
    for spec in &args.tol {
        config.tolerances.apply_override(spec).map_err(|e| {
            eprintln!("error: --tol {spec}: {e}");
            EXIT_VALIDATION
        })?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    std::fs::create_dir_all(&args.out).map_err(|e| {
        eprintln!("error: cannot create {}: {e}", args.out.display());
        EXIT_IO
    })?;

    let started = Instant::now();
    let outcome = execute(&config);
    let code = match &outcome {
        Ok(a) => a.exit_code,
        Err(e) => exit_code(e),
    };
    let meta = Meta {
        program: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        cmd: config.command.name().into(),
        seed: config.seed,
        tolerances: config.tolerances,
        elapsed_seconds: started.elapsed().as_secs_f64(),
        exit_code: code,
    };
    write(&args.out.join("meta.json"), &to_json(&meta))?;
    match outcome {
        Ok(a) => {
            let path = args.out.join("report.json");
            write(&path, &to_json(&a.report))?;
            if let Some(csv) = &a.csv {
                write(&args.out.join("convergence.csv"), csv)?;
            }
            println!("{}", path.display());
            if code != EXIT_OK {
                eprintln!("{} finished with failures recorded in the report", config.command.name());
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    Ok(code)
}
