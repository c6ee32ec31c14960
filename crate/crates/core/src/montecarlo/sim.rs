use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{Estimate, WeightedSample};
use crate::error::{Error, Result};
use crate::exit_laws::ExitWindow;
use crate::stable::{LampertiKind, StableParams, StableSampler};

/// Grid points allowed on a single path.
pub const MAX_GRID_POINTS: f64 = 1e8;

/// Largest censored fraction tolerated before a run is rejected.
pub const MAX_CENSORED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_paths: usize,
    /// Time step of the simulation grid.
    pub step: f64,
    pub seed: u64,
    /// Paths still inside the window at this time are censored.
    pub max_time: f64,
    /// Near a barrier at distance d the step is cut to (κ d)^α, κ being this
    /// value, so that crossings are seen close to the jump that causes them.
    pub barrier_resolution: f64,
}

impl SimConfig {
    pub const DEFAULT_MAX_TIME: f64 = 50.0;
    pub const DEFAULT_BARRIER_RESOLUTION: f64 = 0.1;
    /// Smallest step, relative to `step`.
    pub const MIN_STEP_FRACTION: f64 = 1e-10;

    pub fn new(n_paths: usize, step: f64, seed: u64) -> Result<Self> {
        Self::with_max_time(n_paths, step, seed, Self::DEFAULT_MAX_TIME)
    }

    pub fn with_max_time(n_paths: usize, step: f64, seed: u64, max_time: f64) -> Result<Self> {
        if n_paths < 1 {
            return Err(Error::Config("need at least one path".into()));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Config(format!("step must be positive, got {step}")));
        }
        if !(max_time > 0.0 && max_time.is_finite()) {
            return Err(Error::Config(format!("max_time must be positive, got {max_time}")));
        }
        if max_time / step > MAX_GRID_POINTS {
            return Err(Error::Budget(format!(
                "max_time/step = {:.3e} exceeds the cap of {MAX_GRID_POINTS:e} grid points per path",
                max_time / step
            )));
        }
        Ok(Self { n_paths, step, seed, max_time, barrier_resolution: Self::DEFAULT_BARRIER_RESOLUTION })
    }

    pub fn with_barrier_resolution(mut self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Config(format!("barrier resolution must be positive, got {kappa}")));
        }
        self.barrier_resolution = kappa;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitSide {
    Up,
    Down,
    /// Left (0, ∞) before leaving the window.
    Killed,
    /// Still inside the window at `max_time`.
    Censored,
}

impl ExitSide {
    pub fn name(self) -> &'static str {
        match self {
            ExitSide::Up => "up",
            ExitSide::Down => "down",
            ExitSide::Killed => "killed",
            ExitSide::Censored => "censored",
        }
    }
}

impl std::str::FromStr for ExitSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(ExitSide::Up),
            "down" => Ok(ExitSide::Down),
            "killed" => Ok(ExitSide::Killed),
            "censored" => Ok(ExitSide::Censored),
            other => Err(Error::Config(format!("unknown exit side '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub side: ExitSide,
    /// ln(X/e^u) after an up exit, ln(e^v/X) after a down exit.
    pub overshoot_theta: Option<f64>,
    pub h_weight: f64,
    pub steps_used: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitSampleSet {
    pub kind: LampertiKind,
    pub params: StableParams,
    pub window: ExitWindow,
    pub config: SimConfig,
    pub records: Vec<PathRecord>,
}

impl ExitSampleSet {
    pub fn count(&self, side: ExitSide) -> usize {
        self.records.iter().filter(|r| r.side == side).count()
    }

    /// Σ h·1{side} / n, an estimate of the probability of `side` under the
    /// law of `kind`.
    pub fn side_mass(&self, side: ExitSide) -> Estimate {
        Estimate::mean(self.records.iter().map(|r| if r.side == side { r.h_weight } else { 0.0 }))
    }

    /// Weighted share of up exits among all window exits, with the
    /// ratio-estimator standard error.
    pub fn up_share(&self) -> Estimate {
        let (mut wu, mut wd) = (0.0, 0.0);
        let (mut wu2, mut wd2) = (0.0, 0.0);
        for r in &self.records {
            match r.side {
                ExitSide::Up => {
                    wu += r.h_weight;
                    wu2 += r.h_weight * r.h_weight;
                }
                ExitSide::Down => {
                    wd += r.h_weight;
                    wd2 += r.h_weight * r.h_weight;
                }
                _ => {}
            }
        }
        let tot = wu + wd;
        if tot == 0.0 {
            return Estimate { value: f64::NAN, se: f64::NAN, n: 0 };
        }
        let share = wu / tot;
        // Σ w² (1{up} - share)² / (Σ w)².
        let var = (wu2 * (1.0 - share).powi(2) + wd2 * share * share) / (tot * tot);
        Estimate { value: share, se: var.sqrt(), n: self.count(ExitSide::Up) + self.count(ExitSide::Down) }
    }

    /// Weighted overshoot sample of one side.
    pub fn overshoots(&self, side: ExitSide) -> Vec<WeightedSample> {
        self.records
            .iter()
            .filter(|r| r.side == side)
            .filter_map(|r| r.overshoot_theta.map(|t| WeightedSample { value: t, weight: r.h_weight }))
            .collect()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.count(ExitSide::Censored) as f64 / self.records.len() as f64
    }
}

struct Barriers {
    upper: f64,
    lower: f64,
    ln_upper: f64,
    ln_lower: f64,
}

fn h_weight(kind: LampertiKind, h: f64, side: ExitSide, x: f64) -> f64 {
    match (kind, side) {
        (LampertiKind::Star, _) => 1.0,
        (_, ExitSide::Up | ExitSide::Down) => x.powf(h),
        _ => 0.0,
    }
}

/// One path from 1. The step is min(step, (κ d)^α) with d the distance to
/// the nearer barrier, floored at `step * MIN_STEP_FRACTION`. Increments are
/// exact in law for any step, so only the monitoring is discrete.
fn run_path(sampler: &StableSampler, alpha: f64, cfg: &SimConfig, b: &Barriers, kind: LampertiKind, h: f64, rng: &mut ChaCha8Rng) -> PathRecord {
    let dt_min = cfg.step * SimConfig::MIN_STEP_FRACTION;
    let max_steps = MAX_GRID_POINTS as u64;
    let (mut x, mut t, mut steps) = (1.0f64, 0.0, 0u64);
    while t < cfg.max_time && steps < max_steps {
        let d = (b.upper - x).min(x - b.lower);
        let dt = (cfg.barrier_resolution * d).powf(alpha).clamp(dt_min, cfg.step);
        x += sampler.increment(dt, rng);
        t += dt;
        steps += 1;
        let outcome = if x >= b.upper {
            Some((ExitSide::Up, Some(x.ln() - b.ln_upper)))
        } else if x <= 0.0 {
            Some((ExitSide::Killed, None))
        } else if x <= b.lower {
            Some((ExitSide::Down, Some(b.ln_lower - x.ln())))
        } else {
            None
        };
        if let Some((side, theta)) = outcome {
            return PathRecord { side, overshoot_theta: theta, h_weight: h_weight(kind, h, side, x), steps_used: steps };
        }
    }
    PathRecord { side: ExitSide::Censored, overshoot_theta: None, h_weight: 0.0, steps_used: steps }
}

/// Simulate the exit of X from (e^v, e^u) started at 1. Path i uses the
/// ChaCha8 stream i of `cfg.seed` (the word position plays the role of the
/// step index), so the result does not depend on the number of worker
/// threads.
pub fn simulate_exit(kind: LampertiKind, p: &StableParams, window: ExitWindow, cfg: &SimConfig) -> Result<ExitSampleSet> {
    p.require_two_sided()?;
    ExitWindow::new(window.v, window.u)?;
    let sampler = StableSampler::new(p)?;
    let b = Barriers { upper: window.u.exp(), lower: window.v.exp(), ln_upper: window.u, ln_lower: window.v };
    let h = kind.h_exponent(p);
    let records: Vec<PathRecord> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i);
            run_path(&sampler, p.alpha, cfg, &b, kind, h, &mut rng)
        })
        .collect();
    let set = ExitSampleSet { kind, params: *p, window, config: *cfg, records };
    let frac = set.censored_fraction();
    if frac >= MAX_CENSORED_FRACTION {
        return Err(Error::Budget(format!(
            "{} of {} paths still inside the window at t={} (step {}); raise max_time",
            set.count(ExitSide::Censored),
            set.records.len(),
            cfg.max_time,
            cfg.step
        )));
    }
    Ok(set)
}
