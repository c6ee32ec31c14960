use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use pssmp_core::{LampertiKind, ScaleCase, StableParams};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Tabulate a law on a grid (CSV).
    Eval,
    /// Simulate exits from a window (CSV, one row per path).
    Simulate,
    /// Run a verification suite (JSON report).
    Verify,
}

/// Flags as given on the command line. Every parameter is optional here so
/// that a config file can supply it; flags win over the file.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "pssmp", version, about = "Exit laws, scale functions and exponential functionals of stable Lamperti processes")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Suite for `verify`: normalization, esscher, extrema, scale, hitting,
    /// expfun, montecarlo or all.
    pub suite: Option<String>,
    #[arg(long)]
    pub law: Option<String>,
    /// up, star or down.
    #[arg(long)]
    pub kind: Option<String>,
    /// Exit side for the exit-density laws: up or down.
    #[arg(long)]
    pub side: Option<String>,
    /// Spectral case for scale-function laws: up-neg, down-neg or down-pos.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// P(X₁ < 0).
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long = "c-plus")]
    pub c_plus: Option<f64>,
    #[arg(long = "c-minus")]
    pub c_minus: Option<f64>,
    /// Override of the normalization m of the scale functions.
    #[arg(long)]
    pub m: Option<f64>,
    /// Killing rate of the descending ladder height (down-neg triple law).
    #[arg(long = "q-ladder")]
    pub q_ladder: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Time of the entrance law.
    #[arg(long)]
    pub time: Option<f64>,
    /// A:B:N or A:B:N:log.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long = "n-paths")]
    pub n_paths: Option<usize>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Series and quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Usage(format!("grid must be A:B:N or A:B:N:log, got '{s}'"));
        if !(parts.len() == 3 || parts.len() == 4) {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None => false,
            Some("log") => true,
            Some(_) => return Err(bad()),
        };
        let g = Self { start, stop, points, log };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(CliError::Usage(format!("grid needs at least 2 points, got {}", self.points)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Usage("grid ends must be finite".into()));
        }
        if self.log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(CliError::Usage("a log grid needs positive ends".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                if i == n {
                    self.stop
                } else if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }

    pub fn spec(&self) -> String {
        format!("{}:{}:{}{}", self.start, self.stop, self.points, if self.log { ":log" } else { "" })
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub suite: String,
    pub law: Option<String>,
    pub kind: LampertiKind,
    pub side: String,
    pub case: ScaleCase,
    pub alpha: f64,
    pub rho: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub m: Option<f64>,
    pub q_ladder: Option<f64>,
    pub u: f64,
    pub v: f64,
    pub time: f64,
    pub grid: Option<Grid>,
    pub n_paths: Option<usize>,
    pub step: Option<f64>,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Flat `key = value` file; `#` starts a comment. Keys are flag names with
/// either `-` or `_`.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got '{raw}'", i + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn from_file<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    file.get(key)
        .map(|s| s.parse::<T>().map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{s}'"))))
        .transpose()
}

const KNOWN_KEYS: [&str; 22] = [
    "command", "suite", "law", "kind", "side", "case", "alpha", "rho", "c-plus", "c-minus", "m", "q-ladder", "u", "v",
    "time", "grid", "n-paths", "step", "seed", "tol", "out", "config",
];

impl RunConfig {
    /// Merge flags over the config file, then the PSSMP_SEED fallback, then
    /// defaults, and validate the parameter record.
    pub fn resolve(cli: Cli, env_seed: Option<String>) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown config key '{k}'")));
        }
        let command = match cli.command {
            Some(c) => c,
            None => match file.get("command") {
                Some(s) => Command::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown command '{s}'")))?,
                None => return Err(CliError::Usage("missing command: eval, simulate or verify".into())),
            },
        };
        macro_rules! pick {
            ($field:ident, $key:expr) => {
                match cli.$field {
                    Some(v) => Some(v),
                    None => from_file(&file, $key)?,
                }
            };
        }
        let env_seed = env_seed
            .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("PSSMP_SEED must be an integer, got '{s}'"))))
            .transpose()?;
        let kind: String = pick!(kind, "kind").unwrap_or_else(|| "up".into());
        let case: String = pick!(case, "case").unwrap_or_else(|| "up-neg".into());
        let grid: Option<String> = pick!(grid, "grid");
        let cfg = Self {
            command,
            suite: pick!(suite, "suite").unwrap_or_else(|| "all".into()),
            law: pick!(law, "law"),
            kind: kind.parse()?,
            side: pick!(side, "side").unwrap_or_else(|| "up".into()),
            case: case.parse()?,
            alpha: pick!(alpha, "alpha").unwrap_or(1.5),
            rho: pick!(rho, "rho").unwrap_or(0.5),
            c_plus: pick!(c_plus, "c-plus").unwrap_or(1.0),
            c_minus: pick!(c_minus, "c-minus").unwrap_or(1.0),
            m: pick!(m, "m"),
            q_ladder: pick!(q_ladder, "q-ladder"),
            u: pick!(u, "u").unwrap_or(0.5),
            v: pick!(v, "v").unwrap_or(-0.5),
            time: pick!(time, "time").unwrap_or(1.0),
            grid: grid.as_deref().map(Grid::parse).transpose()?,
            n_paths: pick!(n_paths, "n-paths"),
            step: pick!(step, "step"),
            seed: pick!(seed, "seed").or(env_seed).unwrap_or(DEFAULT_SEED),
            tol: pick!(tol, "tol").unwrap_or(1e-12),
            out: pick!(out, "out"),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        StableParams::new(self.alpha, self.rho, self.c_plus, self.c_minus)?;
        if !(self.tol > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !(self.u > 0.0 && self.v < 0.0) {
            return Err(CliError::Usage(format!("need v < 0 < u, got v={}, u={}", self.v, self.u)));
        }
        if !matches!(self.side.as_str(), "up" | "down") {
            return Err(CliError::Usage(format!("side must be up or down, got '{}'", self.side)));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<StableParams> {
        Ok(StableParams::new(self.alpha, self.rho, self.c_plus, self.c_minus)?)
    }

    /// Metadata common to every output.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("tool".to_string(), "pssmp".to_string()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("alpha".into(), format!("{:?}", self.alpha)),
            ("rho".into(), format!("{:?}", self.rho)),
            ("c_plus".into(), format!("{:?}", self.c_plus)),
            ("c_minus".into(), format!("{:?}", self.c_minus)),
            ("kind".into(), self.kind.name().into()),
            ("u".into(), format!("{:?}", self.u)),
            ("v".into(), format!("{:?}", self.v)),
            ("tol".into(), format!("{:?}", self.tol)),
        ];
        if let Some(m_) = self.m {
            m.push(("m".into(), format!("{m_:?}")));
        }
        if let Some(q) = self.q_ladder {
            m.push(("q_ladder".into(), format!("{q:?}")));
        }
        m
    }
}
