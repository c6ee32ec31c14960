mod args;
mod csv;
mod error;
mod laws;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pssmp_core::montecarlo::{simulate_exit, SimConfig};
use pssmp_core::{run_suite, ExitWindow, Suite, VerifyOptions};

use args::{Cli, Command, RunConfig};
use csv::{Cell, Table};
use error::{CliError, Result};

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn eval(cfg: &RunConfig) -> Result<i32> {
    let law = cfg.law.as_deref().ok_or_else(|| CliError::Usage(format!("eval needs --law, one of: {}", laws::LAWS.join(", "))))?;
    let table = laws::evaluate(law, cfg)?;
    let mut buf = vec![];
    table.write(&mut buf)?;
    emit(cfg, &buf)?;
    Ok(0)
}

fn simulate(cfg: &RunConfig) -> Result<i32> {
    let p = cfg.params()?;
    let window = ExitWindow::new(cfg.v, cfg.u)?;
    let sim = SimConfig::new(cfg.n_paths.unwrap_or(1000), cfg.step.unwrap_or(1e-3), cfg.seed)?;
    let set = simulate_exit(cfg.kind, &p, window, &sim)?;
    let mut t = Table::new(&["path_id", "side", "theta", "h_weight", "steps_used"]);
    t.metadata = cfg.metadata();
    t.meta("seed", sim.seed);
    t.meta("step", sim.step);
    t.meta("n_paths", sim.n_paths);
    t.meta("max_time", sim.max_time);
    t.meta("barrier_resolution", sim.barrier_resolution);
    for (i, r) in set.records.iter().enumerate() {
        t.rows.push(vec![
            Cell::Int(i as u64),
            Cell::Text(r.side.name().into()),
            r.overshoot_theta.map_or(Cell::Empty, Cell::Num),
            Cell::Num(r.h_weight),
            Cell::Int(r.steps_used),
        ]);
    }
    let mut buf = vec![];
    t.write(&mut buf)?;
    emit(cfg, &buf)?;
    Ok(0)
}

fn verify(cfg: &RunConfig) -> Result<i32> {
    let suite: Suite = cfg.suite.parse()?;
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed: cfg.seed,
        n_paths: cfg.n_paths.unwrap_or(defaults.n_paths),
        step: cfg.step.unwrap_or(defaults.step),
        ..defaults
    };
    if opts.n_paths == 0 || !(opts.step > 0.0) {
        return Err(CliError::Usage("n-paths and step must be positive".into()));
    }
    let report = run_suite(suite, &opts);
    let mut buf = serde_json::to_vec_pretty(&report)?;
    buf.push(b'\n');
    emit(cfg, &buf)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn run() -> Result<i32> {
    let cli = Cli::try_parse().map_err(|e| {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            let _ = e.print();
            std::process::exit(0);
        }
        CliError::Usage(e.to_string())
    })?;
    let cfg = RunConfig::resolve(cli, std::env::var("PSSMP_SEED").ok())?;
    match cfg.command {
        Command::Eval => eval(&cfg),
        Command::Simulate => simulate(&cfg),
        Command::Verify => verify(&cfg),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pssmp: {}", e.to_string().trim_end());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
