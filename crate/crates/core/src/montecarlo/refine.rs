use serde::{Deserialize, Serialize};

use super::sim::{simulate_exit, ExitSampleSet, ExitSide, SimConfig};
use super::stats::Estimate;
use crate::error::{Error, Result};
use crate::exit_laws::ExitWindow;
use crate::stable::{LampertiKind, StableParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub step: f64,
    pub barrier_resolution: f64,
    /// Weighted up-exit probability.
    pub up_mass: Estimate,
    /// Weighted share of up exits among window exits.
    pub up_share: Estimate,
    /// Weighted mean of the up overshoot θ.
    pub mean_overshoot_up: Estimate,
    pub censored: usize,
}

/// Exit statistics on successively halved time steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub kind: LampertiKind,
    /// Coarsest first.
    pub rows: Vec<RefinementRow>,
    /// Change in `up_share` from each level to the next.
    pub share_drift: Vec<f64>,
    pub mass_drift: Vec<f64>,
    pub mean_overshoot_drift: Vec<f64>,
    /// Order p assumed for a bias C·step^p, namely 1/α.
    pub assumed_order: f64,
    /// Remaining bias at the finest level implied by the part of the last
    /// drift that exceeds two standard errors.
    pub share_bias: f64,
    pub mass_bias: f64,
    pub mean_overshoot_bias: f64,
    /// Sample sets, coarsest first.
    pub sets: Vec<ExitSampleSet>,
}

impl RefinementReport {
    pub fn finest(&self) -> &ExitSampleSet {
        self.sets.last().expect("at least two levels")
    }
}

fn mean_overshoot(s: &ExitSampleSet) -> Estimate {
    let sample = s.overshoots(ExitSide::Up);
    let total: f64 = sample.iter().map(|w| w.weight).sum();
    if total == 0.0 {
        return Estimate { value: f64::NAN, se: f64::NAN, n: 0 };
    }
    let mu = sample.iter().map(|w| w.weight * w.value).sum::<f64>() / total;
    let var = sample.iter().map(|w| (w.weight * (w.value - mu)).powi(2)).sum::<f64>() / (total * total);
    Estimate { value: mu, se: var.sqrt(), n: sample.len() }
}

/// |d| beyond two standard errors of the difference, scaled to the bias at
/// the finer step when the bias is C·step^p: excess / (2^p - 1).
fn bias_from_drift(a: &Estimate, b: &Estimate, order: f64) -> f64 {
    let d = (b.value - a.value).abs();
    let noise = 2.0 * (a.se * a.se + b.se * b.se).sqrt();
    (d - noise).max(0.0) / (2f64.powf(order) - 1.0)
}

/// Simulate at levels k = 0..levels, each halving every time step of the
/// previous one (the step cap and the near-barrier steps alike), with the
/// same seed, and tabulate how the exit statistics move.
pub fn step_refinement_report(kind: LampertiKind, p: &StableParams, window: ExitWindow, cfg: &SimConfig, levels: usize) -> Result<RefinementReport> {
    if levels < 2 {
        return Err(Error::Config(format!("a refinement study needs at least two levels, got {levels}")));
    }
    if levels > 12 {
        return Err(Error::Config(format!("{levels} refinement levels exceed the supported depth of 12")));
    }
    let mut sets = Vec::with_capacity(levels);
    for k in 0..levels {
        let halvings = (1u64 << k) as f64;
        let level_cfg = SimConfig { step: cfg.step / halvings, ..*cfg }
            .with_barrier_resolution(cfg.barrier_resolution * halvings.powf(-1.0 / p.alpha))?;
        sets.push(simulate_exit(kind, p, window, &level_cfg)?);
    }
    let rows: Vec<RefinementRow> = sets
        .iter()
        .map(|s| RefinementRow {
            step: s.config.step,
            barrier_resolution: s.config.barrier_resolution,
            up_mass: s.side_mass(ExitSide::Up),
            up_share: s.up_share(),
            mean_overshoot_up: mean_overshoot(s),
            censored: s.count(ExitSide::Censored),
        })
        .collect();
    let order = 1.0 / p.alpha;
    let drift = |f: fn(&RefinementRow) -> Estimate| rows.windows(2).map(|w| f(&w[1]).value - f(&w[0]).value).collect::<Vec<f64>>();
    let bias = |f: fn(&RefinementRow) -> Estimate| {
        let n = rows.len();
        bias_from_drift(&f(&rows[n - 2]), &f(&rows[n - 1]), order)
    };
    Ok(RefinementReport {
        kind,
        share_drift: drift(|r| r.up_share),
        mass_drift: drift(|r| r.up_mass),
        mean_overshoot_drift: drift(|r| r.mean_overshoot_up),
        share_bias: bias(|r| r.up_share),
        mass_bias: bias(|r| r.up_mass),
        mean_overshoot_bias: bias(|r| r.mean_overshoot_up),
        assumed_order: order,
        rows,
        sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_level_rejected() {
        let p = StableParams::two_sided(1.5, 0.5).unwrap();
        let w = ExitWindow::new(-0.5, 0.5).unwrap();
        let cfg = SimConfig::new(10, 1e-2, 1).unwrap();
        assert!(step_refinement_report(LampertiKind::Star, &p, w, &cfg, 1).is_err());
    }

    #[test]
    fn report_is_deterministic_and_levels_halve_steps() {
        let p = StableParams::two_sided(1.5, 0.5).unwrap();
        let w = ExitWindow::new(-0.5, 0.5).unwrap();
        let cfg = SimConfig::new(1000, 8e-3, 21).unwrap();
        let a = step_refinement_report(LampertiKind::Star, &p, w, &cfg, 3).unwrap();
        let b = step_refinement_report(LampertiKind::Star, &p, w, &cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 3);
        assert!((a.rows[2].step - 2e-3).abs() < 1e-18);
        let k = a.rows[2].barrier_resolution / a.rows[0].barrier_resolution;
        assert!((k.powf(1.5) - 0.25).abs() < 1e-12);
        assert_eq!(a.sets[0], simulate_exit(LampertiKind::Star, &p, w, &cfg).unwrap());
        for d in &a.share_drift {
            assert!(d.abs() < 0.08, "{d}");
        }
        assert!(a.share_bias.is_finite() && a.share_bias >= 0.0);
    }

    #[test]
    fn drift_within_noise_is_not_bias() {
        let a = Estimate { value: 0.40, se: 0.01, n: 100 };
        let b = Estimate { value: 0.41, se: 0.01, n: 100 };
        assert_eq!(bias_from_drift(&a, &b, 0.5), 0.0);
        let c = Estimate { value: 0.50, se: 0.01, n: 100 };
        assert!(bias_from_drift(&a, &c, 1.0) > 0.07);
    }
}
