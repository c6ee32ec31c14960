//! Verification suites: each check compares an implemented law with an
//! independent route (quadrature, a second closed form, simulation) and
//! reports the measured discrepancy against its tolerance.
//!
//! Checks with status `Finding` document a disagreement between a commonly
//! quoted closed form and the law implemented here; they never fail a run.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exit_laws::{
    exit_density_two_sided, exit_mass, extrema_density_star, max_cdf_down, min_cdf_up, overshoot_cdf, Direction,
    ExitLawQuery, ExitWindow, ExtremaFormula, Extremum, Window,
};
use crate::expfun::{
    density_i, density_i_star, density_i_star_as_printed, entrance_density, entrance_moment, laplace_i,
    neg_moment_i, tail_exponent_check, ExpFunctionalCase, ExpFunctionalModel, TailKind,
};
use crate::hitting::{hit_closed_ratio, hit_closed_ratio_with, hit_matrix_method, hit_prob_lamperti, HitQuery};
use crate::montecarlo::{
    effective_size, ks_distance, ks_threshold, simulate_exit, step_refinement_report, Estimate, ExitSide, SimConfig,
};
use crate::numerics::{gamma_pos, Quadrature};
use crate::scale::{psi_down, psi_up, scale_fn, triple_law_cross_check, ScaleCase, SpectralCase};
use crate::stable::{KilledResolvent, LampertiKind, StableParams};

pub const REPORT_SCHEMA: &str = "report_v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Normalization,
    Esscher,
    Extrema,
    Scale,
    Hitting,
    Expfun,
    Montecarlo,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Normalization,
        Suite::Esscher,
        Suite::Extrema,
        Suite::Scale,
        Suite::Hitting,
        Suite::Expfun,
        Suite::Montecarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Esscher => "esscher",
            Suite::Extrema => "extrema",
            Suite::Scale => "scale",
            Suite::Hitting => "hitting",
            Suite::Expfun => "expfun",
            Suite::Montecarlo => "montecarlo",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A documented disagreement with a quoted closed form; informational.
    Finding,
    /// Nothing to check for these inputs.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity or law being exercised.
    pub identity: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn compare(name: &str, identity: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        let status = if measured <= tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.into(), identity: identity.into(), status, measured, tolerance, detail }
    }

    fn failed(name: &str, identity: &str, err: &Error) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            status: Status::Fail,
            measured: f64::NAN,
            tolerance: f64::NAN,
            detail: err.to_string(),
        }
    }

    fn run(name: &str, identity: &str, tolerance: f64, f: impl FnOnce() -> Result<(f64, String)>) -> Self {
        match f() {
            Ok((measured, detail)) => Self::compare(name, identity, measured, tolerance, detail),
            Err(e) => Self::failed(name, identity, &e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub runtime_seconds: f64,
}

impl SuiteReport {
    /// True when no check failed; findings and skips do not count.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Budget of the simulation suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub n_paths: usize,
    /// Step of the finest simulation level.
    pub step: f64,
    /// Levels of the step-halving study ending at `step`.
    pub refinement_levels: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 20_240_917, n_paths: 100_000, step: 1e-4, refinement_levels: 2 }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let start = Instant::now();
    let checks = match suite {
        Suite::Normalization => normalization(),
        Suite::Esscher => esscher(opts.seed),
        Suite::Extrema => extrema(),
        Suite::Scale => scale(),
        Suite::Hitting => hitting(),
        Suite::Expfun => expfun(),
        Suite::Montecarlo => montecarlo(opts),
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, opts).checks).collect(),
    };
    SuiteReport {
        schema: REPORT_SCHEMA.into(),
        suite,
        checks,
        seed: opts.seed,
        runtime_seconds: start.elapsed().as_secs_f64(),
    }
}

/// The (α, ρ) grid of the deterministic suites, restricted to two-sided
/// parameters; returns the admissible records and the skipped pairs.
pub fn parameter_grid() -> (Vec<StableParams>, Vec<(f64, f64)>) {
    let (mut ok, mut skipped) = (vec![], vec![]);
    for alpha in [0.8, 1.2, 1.5, 1.8] {
        for rho in [0.3, 0.5, 0.7] {
            match StableParams::two_sided(alpha, rho) {
                Ok(p) => ok.push(p),
                Err(_) => skipped.push((alpha, rho)),
            }
        }
    }
    (ok, skipped)
}

const LEVELS: [f64; 3] = [0.25, 1.0, 3.0];

fn windows() -> Vec<ExitWindow> {
    let mut out = vec![];
    for u in LEVELS {
        for mv in LEVELS {
            out.push(ExitWindow { v: -mv, u });
        }
    }
    out
}

fn skipped_note(skipped: &[(f64, f64)]) -> String {
    let list: Vec<String> = skipped.iter().map(|(a, r)| format!("({a},{r})")).collect();
    format!("skipped (alpha,rho) outside two-sided mode: {}", list.join(" "))
}

fn normalization() -> Vec<Check> {
    let (grid, skipped) = parameter_grid();
    let mut out = vec![];
    for (kind, name) in [(LampertiKind::Up, "exit-mass-up-kind"), (LampertiKind::Down, "exit-mass-down-kind")] {
        out.push(Check::run(name, "up-exit mass + down-exit mass = 1 for the conditioned process", 1e-6, || {
            let mut worst: f64 = 0.0;
            let mut n = 0;
            for p in &grid {
                for w in windows() {
                    let up = exit_mass(kind, p, Window::TwoSided(w), Direction::Up)?.total();
                    let dn = exit_mass(kind, p, Window::TwoSided(w), Direction::Down)?.total();
                    worst = worst.max((up + dn - 1.0).abs());
                    n += 1;
                }
            }
            Ok((worst, format!("max |mass - 1| over {n} cases; {}", skipped_note(&skipped))))
        }));
    }
    out.push(Check::run("exit-mass-star-kind", "killed process: exit masses sum to P(exit before killing) < 1", 1e-6, || {
        // 1 - (up + down) is the probability that X jumps below 0 first: it
        // must lie in (0, 1).
        let mut worst: f64 = 0.0;
        for p in &grid {
            for w in windows() {
                let up = exit_mass(LampertiKind::Star, p, Window::TwoSided(w), Direction::Up)?.total();
                let dn = exit_mass(LampertiKind::Star, p, Window::TwoSided(w), Direction::Down)?.total();
                let killed = 1.0 - up - dn;
                worst = worst.max((-killed).max(0.0)).max((killed - 1.0).max(0.0));
            }
        }
        Ok((worst, "largest excursion of the killing probability outside [0, 1]".into()))
    }));
    out
}

fn esscher(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(StableParams, ExitWindow, f64)> = (0..1000)
        .map(|_| loop {
            let alpha: f64 = rng.gen_range(0.2..1.95);
            let lo = (1.0 - 1.0 / alpha).max(0.0);
            let hi = (1.0 / alpha).min(1.0);
            let rho = lo + (hi - lo) * rng.gen_range(0.02..0.98);
            let u = rng.gen_range(0.05f64..3.0);
            let v = -rng.gen_range(0.05f64..3.0);
            let theta = 10f64.powf(rng.gen_range(-3.0..0.7));
            if let Ok(p) = StableParams::two_sided(alpha, rho) {
                break (p, ExitWindow { v, u }, theta);
            }
        })
        .collect();
    let density = |kind, p: &StableParams, w: ExitWindow, direction, theta| {
        exit_density_two_sided(&ExitLawQuery { kind, params: *p, window: Window::TwoSided(w), direction, theta })
    };
    let ratio_check = |name: &str, identity: &str, num: LampertiKind, den: LampertiKind| {
        Check::run(name, identity, 1e-12, || {
            let mut worst: f64 = 0.0;
            for (p, w, theta) in &draws {
                for dir in [Direction::Up, Direction::Down] {
                    let x = match dir {
                        Direction::Up => w.u + theta,
                        Direction::Down => w.v - theta,
                    };
                    let expo = num.gamma_exponent(p) - den.gamma_exponent(p);
                    let want = (expo * x).exp();
                    let got = density(num, p, *w, dir, *theta)? / density(den, p, *w, dir, *theta)?;
                    worst = worst.max((got / want - 1.0).abs());
                }
            }
            Ok((worst, format!("max relative error over {} draws and both exit sides", draws.len())))
        })
    };
    vec![
        ratio_check("density-ratio-up-down", "up/down exit density ratio = e^{x} at the landing point x", LampertiKind::Up, LampertiKind::Down),
        ratio_check("density-ratio-up-star", "up/killed exit density ratio = e^{αρ x} at the landing point x", LampertiKind::Up, LampertiKind::Star),
    ]
}

fn extrema() -> Vec<Check> {
    let (grid, skipped) = parameter_grid();
    let mut out = vec![];
    out.push(Check::run("min-cdf-up-vs-exit-mass", "P(-inf ξ↑ ≤ z) = 1 - mass of ξ↑ going below -z", 1e-6, || {
        let mut worst: f64 = 0.0;
        for p in &grid {
            for z in LEVELS {
                let m = exit_mass(LampertiKind::Up, p, Window::Below(-z), Direction::Down)?.total();
                worst = worst.max((min_cdf_up(p, z)? - (1.0 - m)).abs());
            }
        }
        Ok((worst, skipped_note(&skipped)))
    }));
    out.push(Check::run("max-cdf-down-vs-exit-mass", "P(sup ξ↓ ≤ z) = 1 - mass of ξ↓ going above z", 1e-6, || {
        let mut worst: f64 = 0.0;
        for p in &grid {
            for z in LEVELS {
                let m = exit_mass(LampertiKind::Down, p, Window::Above(z), Direction::Up)?.total();
                worst = worst.max((max_cdf_down(p, z)? - (1.0 - m)).abs());
            }
        }
        Ok((worst, skipped_note(&skipped)))
    }));
    out.push(Check::run("max-star-density-mass", "density of sup ξ* integrates to 1", 1e-8, || {
        let mut worst: f64 = 0.0;
        for p in &grid {
            let d = |z: f64| extrema_density_star(p, z, Extremum::Max, ExtremaFormula::Derived).unwrap_or(f64::NAN);
            worst = worst.max((mass_on_half_line(d, p.a_rho_hat())? - 1.0).abs());
        }
        Ok((worst, format!("max |mass - 1| over {} parameter pairs", grid.len())))
    }));
    out.push(min_star_finding(&grid));
    out
}

/// ∫₀^∞ f for f ~ z^{β-1} at 0 and exponential decay: z = s^{1/β} on [0, 1].
fn mass_on_half_line<F: Fn(f64) -> f64>(f: F, beta: f64) -> Result<f64> {
    let q = Quadrature::new(1e-14, 1e-13).with_max_segments(4000);
    let pw = 1.0 / beta;
    let head = q.integrate(|s: f64| if s <= 0.0 { 0.0 } else { f(s.powf(pw)) * pw * s.powf(pw - 1.0) }, 0.0, 1.0)?;
    let tail = q.integrate(&f, 1.0, f64::INFINITY)?;
    Ok(head.value + tail.value)
}

fn min_star_finding(grid: &[StableParams]) -> Check {
    let name = "min-star-law-as-quoted";
    let identity = "density of -inf ξ*: quoted closed form vs law derived from the two-sided exit probability";
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        for p in grid {
            let d = |z: f64| extrema_density_star(p, z, Extremum::Min, ExtremaFormula::Derived).unwrap_or(f64::NAN);
            let q = Quadrature::new(1e-12, 1e-11).with_max_segments(4000);
            let pw = 1.0 / p.a_rho();
            let head = q.integrate(|s: f64| if s <= 0.0 { 0.0 } else { d(s.powf(pw)) * pw * s.powf(pw - 1.0) }, 0.0, 1.0)?;
            let tail = q.integrate(d, 1.0, f64::INFINITY)?;
            worst = worst.max((head.value + tail.value - 1.0).abs());
        }
        let p = StableParams::two_sided(1.5, 0.5)?;
        let printed = |z: f64| extrema_density_star(&p, z, Extremum::Min, ExtremaFormula::AsPrinted).unwrap_or(f64::NAN);
        let q = Quadrature::new(1e-9, 1e-9);
        let m10 = q.integrate(printed, 0.0, 10.0)?.value;
        let m20 = q.integrate(printed, 0.0, 20.0)?.value;
        let diverges = m20 > m10 && m10 > 1.0;
        let derived_ok = worst <= 1e-5;
        let status = match (derived_ok, diverges) {
            (true, true) => Status::Finding,
            _ => Status::Fail,
        };
        Ok(Check {
            name: name.into(),
            identity: identity.into(),
            status,
            measured: worst,
            tolerance: 1e-5,
            detail: format!(
                "derived density: max |mass - 1| = {worst:.3e}; quoted form at (1.5, 0.5): mass on [0,10] = {m10:.6}, on [0,20] = {m20:.6}, growing without bound"
            ),
        })
    };
    run().unwrap_or_else(|e| Check::failed(name, identity, &e))
}

fn scale() -> Vec<Check> {
    let mut out = vec![];
    out.push(Check::run("scale-fn-laplace", "∫ e^{-θx} W↑(x) dx · ψ↑(θ) = 1", 1e-8, || {
        let mut worst: f64 = 0.0;
        for alpha in [1.2, 1.5, 1.8] {
            let s = SpectralCase::new(ScaleCase::UpNeg, alpha, 0.7)?;
            for theta in [2.0, 4.0, 8.0] {
                let f = |x: f64| (-theta * x).exp() * scale_fn(&s, x).unwrap_or(f64::NAN);
                let q = Quadrature::new(1e-14, 1e-13).with_max_segments(4000);
                let lt = q.integrate(f, 0.0, f64::INFINITY)?.value;
                worst = worst.max((lt * psi_up(&s, theta)? - 1.0).abs());
            }
        }
        Ok((worst, "alpha in {1.2,1.5,1.8}, theta in {2,4,8}".into()))
    }));
    out.push(Check::run("scale-fn-laplace-down", "∫ e^{-θx} W↓(x) dx · ψ↓(θ) = 1", 1e-8, || {
        let mut worst: f64 = 0.0;
        for alpha in [1.2, 1.5, 1.8] {
            let s = SpectralCase::new(ScaleCase::DownNeg, alpha, 0.7)?;
            for theta in [2.0, 4.0, 8.0] {
                let f = |x: f64| if x > 500.0 { 0.0 } else { (-theta * x).exp() * scale_fn(&s, x).unwrap_or(f64::NAN) };
                let q = Quadrature::new(1e-14, 1e-13).with_max_segments(4000);
                let lt = q.integrate(f, 0.0, f64::INFINITY)?.value;
                worst = worst.max((lt * psi_down(&s, theta)? - 1.0).abs());
            }
        }
        Ok((worst, "alpha in {1.2,1.5,1.8}, theta in {2,4,8}".into()))
    }));
    out.push(Check::run("psi-down-shift", "ψ↓(θ) = ψ↑(θ - 1)", 4.0 * f64::EPSILON, || {
        let mut worst: f64 = 0.0;
        for alpha in [1.2, 1.5, 1.8] {
            let (su, sd) = (SpectralCase::new(ScaleCase::UpNeg, alpha, 0.7)?, SpectralCase::new(ScaleCase::DownNeg, alpha, 0.7)?);
            for theta in [1.0, 1.5, 2.0, 3.0, 5.0, 9.0] {
                let (a, b) = (psi_down(&sd, theta)?, psi_up(&su, theta - 1.0)?);
                let err = if b == 0.0 { a.abs() } else { (a / b - 1.0).abs() };
                worst = worst.max(err);
            }
        }
        Ok((worst, "relative error".into()))
    }));
    out.push(Check::run("triple-law-normalization", "triple-law density integrates to 1 (quadrature vs reduced route)", 1e-5, || {
        let cases = [
            (SpectralCase::new(ScaleCase::UpNeg, 1.5, 0.7)?, -1.0),
            (SpectralCase::new(ScaleCase::UpNeg, 1.8, 0.7)?, -2.0),
            (SpectralCase::new(ScaleCase::DownPos, 1.4, 1.0)?, 0.8),
            (SpectralCase::new(ScaleCase::DownNeg, 1.6, 0.7)?.with_q_ladder(0.5)?, -0.7),
            (SpectralCase::new(ScaleCase::DownNeg, 1.6, 0.7)?.with_q_ladder(3.0)?, -0.7),
        ];
        let mut worst: f64 = 0.0;
        let mut printed = vec![];
        for (s, b) in cases {
            let c = triple_law_cross_check(&s, b)?;
            worst = worst.max((c.k_reduced / c.k_quadrature - 1.0).abs());
            printed.push(match c.k_printed {
                Some(k) => format!("{:?} K={:.10} quoted {:.6}", s.case, c.k_quadrature, k),
                None => format!("{:?} K={:.10} quoted form unavailable", s.case, c.k_quadrature),
            });
        }
        Ok((worst, printed.join("; ")))
    }));
    out
}

fn hitting() -> Vec<Check> {
    let pts = [0.5, 1.0, 2.0];
    let mut perms = vec![];
    for &x in &pts {
        for &a in &pts {
            for &b in &pts {
                if x != a && a != b && x != b {
                    perms.push((x, a, b));
                }
            }
        }
    }
    let alphas = [1.2, 1.5, 1.8];
    let mut out = vec![];
    out.push(Check::run("matrix-vs-closed-ratio", "matrix inversion and closed ratio give the same hitting probability", 1e-10, || {
        let mut worst: f64 = 0.0;
        for &alpha in &alphas {
            for &(x, a, b) in &perms {
                let q = HitQuery::new(alpha, x, a, b)?;
                worst = worst.max((hit_matrix_method(&q)? - hit_closed_ratio(&q)?).abs());
            }
        }
        Ok((worst, format!("{} permutations x {} alphas", perms.len(), alphas.len())))
    }));
    out.push(Check::run("resolvent-constant-invariance", "hitting probability does not depend on the resolvent constant", 4.0 * f64::EPSILON, || {
        let mut worst: f64 = 0.0;
        for &alpha in &alphas {
            let base = KilledResolvent::new(alpha)?;
            for scale in [1e-3, 0.37, 8.0, 1e4] {
                let r = KilledResolvent::with_kappa(alpha, base.kappa * scale)?;
                for &(x, a, b) in &perms {
                    let q = HitQuery::new(alpha, x, a, b)?;
                    worst = worst.max((hit_closed_ratio_with(&q, &r)? - hit_closed_ratio_with(&q, &base)?).abs());
                }
            }
        }
        Ok((worst, "absolute change under kappa scaled by 1e-3..1e4".into()))
    }));
    out.push(Check::run("lamperti-hitting-in-unit-interval", "P(ξ hits v before u) lies in [0, 1] for ξ↑ and ξ↓", 0.0, || {
        let mut excess: f64 = 0.0;
        let mut n = 0;
        for &alpha in &alphas {
            for kind in [LampertiKind::Up, LampertiKind::Down] {
                for mv in LEVELS {
                    for u in LEVELS {
                        let p = hit_prob_lamperti(kind, alpha, -mv, u)?;
                        excess = excess.max((-p).max(p - 1.0).max(0.0));
                        if !p.is_finite() {
                            excess = f64::INFINITY;
                        }
                        n += 1;
                    }
                }
            }
        }
        Ok((excess, format!("largest distance outside [0,1] over {n} cases")))
    }));
    out
}

fn total_mass<F: Fn(f64) -> f64>(f: F, lo_ln: f64, hi_ln: f64) -> Result<f64> {
    // In x = e^s: handles both thin and heavy power tails.
    let g = |s: f64| f(s.exp()) * s.exp();
    let q = Quadrature::new(1e-13, 1e-11).with_max_segments(4000);
    Ok(q.integrate(g, lo_ln, 0.0)?.value + q.integrate(g, 0.0, hi_ln)?.value)
}

fn expfun() -> Vec<Check> {
    let models = || -> Result<Vec<ExpFunctionalModel>> {
        [(1.2, 1.0), (1.5, 0.7), (1.8, 2.0)]
            .iter()
            .map(|&(a, c)| ExpFunctionalModel::new(ExpFunctionalCase::UpSpectrallyNegative, a, c))
            .collect()
    };
    let mut out = vec![];
    out.push(Check::run("negative-moments-vs-laplace", "E I^{-k} = ∫ λ^{k-1} E e^{-λI} dλ / (k-1)!", 1e-8, || {
        let mut worst: f64 = 0.0;
        for md in models()? {
            for k in 1..=5u32 {
                let f = |l: f64| l.powi(k as i32 - 1) * laplace_i(&md, l).unwrap_or(f64::NAN);
                let q = Quadrature::new(0.0, 1e-12).integrate(f, 0.0, f64::INFINITY)?.value / gamma_pos(k as f64);
                let m = neg_moment_i(&md, k)?;
                worst = worst.max((m / q - 1.0).abs());
            }
        }
        Ok((worst, "relative error, k = 1..5".into()))
    }));
    out.push(Check::run("density-i-mass", "density of I(ξ↑) integrates to 1", 1e-6, || {
        let mut worst: f64 = 0.0;
        for md in models()? {
            let p = |x: f64| density_i(&md, x, 1e-14).map(|s| s.value).unwrap_or(f64::NAN);
            worst = worst.max((total_mass(p, -12.0, 60.0)? - 1.0).abs());
        }
        Ok((worst, "max |mass - 1|".into()))
    }));
    out.push(Check::run("density-i-negative-moments", "∫ x^{-k} p_I(x) dx = E I^{-k}, k = 1, 2", 1e-5, || {
        let mut worst: f64 = 0.0;
        for md in models()? {
            for k in 1..=2 {
                let p = |x: f64| x.powi(-k) * density_i(&md, x, 1e-14).map(|s| s.value).unwrap_or(f64::NAN);
                let m = total_mass(p, -12.0, 60.0)?;
                worst = worst.max((m / neg_moment_i(&md, k as u32)? - 1.0).abs());
            }
        }
        Ok((worst, "relative error".into()))
    }));
    out.push(Check::run("entrance-density-moments", "moments of the entrance law from 0 match their closed form", 1e-5, || {
        let mut worst: f64 = 0.0;
        for (md, t) in models()?.into_iter().zip([1.0, 0.5, 2.0]) {
            let p = |x: f64| entrance_density(&md, t, x, 1e-14).map(|s| s.value).unwrap_or(f64::NAN);
            worst = worst.max((total_mass(p, -40.0, 12.0)? - 1.0).abs());
            for k in 1..=3 {
                let pk = |x: f64| x.powi(k) * p(x);
                worst = worst.max((total_mass(pk, -40.0, 12.0)? / entrance_moment(&md, k as u32, t)? - 1.0).abs());
            }
        }
        Ok((worst, "relative error of the mass and moments k = 1..3".into()))
    }));
    out.push(up_right_tail_slope());
    out.push(Check::run("density-i-right-tail-decay", "density of I(ξ↑) decays like x^{-1-1/α}", 0.02, || {
        let mut worst: f64 = 0.0;
        let mut slopes = vec![];
        for md in models()? {
            let fit = tail_exponent_check(&md, TailKind::UpRight)?;
            worst = worst.max((fit.slope + 1.0 + 1.0 / md.alpha).abs());
            slopes.push(format!("alpha={}: {:.4}", md.alpha, fit.slope));
        }
        Ok((worst, slopes.join(", ")))
    }));
    out.push(star_left_tail_finding());
    out.push(star_density_finding());
    out
}

/// The right tail of the density of I(ξ↑) against the x^{-α} rate quoted for
/// exponential functionals with positive jumps. Here I(ξ↑) is a stable
/// subordinator of index 1/α, whose density decays like x^{-1-1/α}, so this
/// check measures the quoted rate and is expected to fail.
pub fn up_right_tail_slope() -> Check {
    Check::run("density-i-right-tail-slope", "right tail of the density of I(ξ↑) against x^{-α}", 0.05, || {
        let md = ExpFunctionalModel::new(ExpFunctionalCase::UpSpectrallyNegative, 1.5, 1.0)?;
        let fit = tail_exponent_check(&md, TailKind::UpRight)?;
        Ok((
            (fit.slope - fit.stated_exponent).abs(),
            format!(
                "alpha=1.5: fitted slope {:.4}, target {:.4}; the law is explicit (stable subordinator of index 1/alpha) with slope {:.4}",
                fit.slope,
                fit.stated_exponent,
                -1.0 - 1.0 / md.alpha
            ),
        ))
    })
}

fn star_left_tail_finding() -> Check {
    let name = "star-left-tail-slope";
    let identity = "P(I(-ξ*) ≤ x) as x → 0: quoted rate x^{-1} vs measured";
    let run = || -> Result<Check> {
        let md = ExpFunctionalModel::new(ExpFunctionalCase::StarSpectrallyPositive, 1.5, 1.0)?;
        let fit = tail_exponent_check(&md, TailKind::StarLeft)?;
        let dev = (fit.slope - 1.0).abs();
        Ok(Check {
            name: name.into(),
            identity: identity.into(),
            status: if dev <= 0.05 { Status::Finding } else { Status::Fail },
            measured: dev,
            tolerance: 0.05,
            detail: format!(
                "fitted slope {:.4} (quoted {:.0}); the distribution function vanishes linearly, P ~ (c-/alpha) x",
                fit.slope, fit.stated_exponent
            ),
        })
    };
    run().unwrap_or_else(|e| Check::failed(name, identity, &e))
}

fn star_density_finding() -> Check {
    let name = "star-density-as-quoted";
    let identity = "density of I(-ξ*): supremum-transform route vs quoted power series";
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        for (a, c) in [(1.5, 1.0), (1.3, 0.4), (1.8, 3.0)] {
            let md = ExpFunctionalModel::new(ExpFunctionalCase::StarSpectrallyPositive, a, c)?;
            let p = |x: f64| density_i_star(&md, x, 1e-13).map(|s| s.value).unwrap_or(f64::NAN);
            worst = worst.max((total_mass(p, -30.0, 400.0)? - 1.0).abs());
        }
        let md = ExpFunctionalModel::new(ExpFunctionalCase::StarSpectrallyPositive, 1.5, 1.0)?;
        let printed = |x: f64| density_i_star_as_printed(&md, x, 1e-12).map(|s| s.value).unwrap_or(f64::NAN);
        let q = Quadrature::new(1e-9, 1e-9);
        let m10 = q.integrate(printed, 1.0, 10.0)?.value;
        let m100 = q.integrate(printed, 1.0, 100.0)?.value;
        let diverges = m100 > 5.0 * m10 && m10 > 1.0;
        Ok(Check {
            name: name.into(),
            identity: identity.into(),
            status: if worst <= 1e-5 && diverges { Status::Finding } else { Status::Fail },
            measured: worst,
            tolerance: 1e-5,
            detail: format!(
                "transform route: max |mass - 1| = {worst:.3e}; quoted series at alpha=1.5: mass on [1,10] = {m10:.4}, on [1,100] = {m100:.4}"
            ),
        })
    };
    run().unwrap_or_else(|e| Check::failed(name, identity, &e))
}

/// A check whose tolerance is only known once it has run.
fn adaptive(name: &str, identity: &str, f: impl FnOnce() -> Result<(f64, f64, String)>) -> Check {
    match f() {
        Ok((measured, tolerance, detail)) => Check::compare(name, identity, measured, tolerance, detail),
        Err(e) => Check::failed(name, identity, &e),
    }
}

fn montecarlo(opts: &VerifyOptions) -> Vec<Check> {
    let setup = || -> Result<(StableParams, ExitWindow, SimConfig)> {
        Ok((StableParams::two_sided(1.5, 0.5)?, ExitWindow::new(-0.5, 0.5)?, SimConfig::new(opts.n_paths, opts.step, opts.seed)?))
    };
    let (p, w, cfg) = match setup() {
        Ok(x) => x,
        Err(e) => return vec![Check::failed("montecarlo-setup", "simulation budget", &e)],
    };
    let two = Window::TwoSided(w);
    let mut out = vec![];
    out.push(adaptive("star-up-share", "share of up exits of the killed process vs exact exit masses", || {
        let levels = opts.refinement_levels.max(2);
        // The study starts coarser so that its finest level is the requested budget.
        let coarse = 2f64.powi(levels as i32 - 1);
        let start = SimConfig { step: cfg.step * coarse, ..cfg }
            .with_barrier_resolution(cfg.barrier_resolution * coarse.powf(1.0 / p.alpha))?;
        let rep = step_refinement_report(LampertiKind::Star, &p, w, &start, levels)?;
        let up = exit_mass(LampertiKind::Star, &p, two, Direction::Up)?.total();
        let dn = exit_mass(LampertiKind::Star, &p, two, Direction::Down)?.total();
        let exact = up / (up + dn);
        let est = rep.rows.last().expect("levels >= 2").up_share;
        let drifts: Vec<String> = rep.share_drift.iter().map(|d| format!("{d:.2e}")).collect();
        Ok((
            (est.value - exact).abs(),
            3.0 * est.se + 2.0 * rep.share_bias,
            format!(
                "share {:.5} ± {:.5} over {} exits, exact {exact:.6}; step bias {:.2e} from level drifts [{}]; tolerance 3 se + 2 bias",
                est.value,
                est.se,
                est.n,
                rep.share_bias,
                drifts.join(", ")
            ),
        ))
    }));
    let up_set = simulate_exit(LampertiKind::Up, &p, w, &cfg);
    out.push(adaptive("up-overshoot-ks", "weighted overshoot law of ξ↑ above u vs exact distribution function", || {
        let set = up_set.as_ref().map_err(Clone::clone)?;
        let sample = set.overshoots(ExitSide::Up);
        let d = ks_distance(&sample, |t| overshoot_cdf(LampertiKind::Up, &p, two, Direction::Up, t).unwrap_or(f64::NAN))?;
        let tol = ks_threshold(&sample, 0.02);
        Ok((d, tol, format!("{} up exits, effective size {:.0}", sample.len(), effective_size(&sample))))
    }));
    out.push(adaptive("up-h-weight-mass", "mean h-weight of up exits = exact up-exit mass of ξ↑", || {
        let set = up_set.as_ref().map_err(Clone::clone)?;
        let est = set.side_mass(ExitSide::Up);
        let exact = exit_mass(LampertiKind::Up, &p, two, Direction::Up)?.total();
        Ok(((est.value - exact).abs(), 3.0 * est.se, format!("estimate {:.5} ± {:.5}, exact {exact:.6}", est.value, est.se)))
    }));
    out.push(adaptive("esscher-reweighting", "ξ↓ samples reweighted by e^{ξ at exit} reproduce ξ↑ exit masses", || {
        let up = up_set.as_ref().map_err(Clone::clone)?;
        // An independent stream, so that the comparison is statistical.
        let down = simulate_exit(LampertiKind::Down, &p, w, &SimConfig { seed: cfg.seed ^ 0x9e37_79b9_7f4a_7c15, ..cfg })?;
        let mut worst_z: f64 = 0.0;
        let mut parts = vec![];
        for side in [ExitSide::Up, ExitSide::Down] {
            let reweighted = Estimate::mean(down.records.iter().map(|r| match (r.side == side, r.overshoot_theta) {
                (true, Some(t)) => {
                    let x = if side == ExitSide::Up { w.u + t } else { w.v - t };
                    r.h_weight * x.exp()
                }
                _ => 0.0,
            }));
            let direct = up.side_mass(side);
            let z = (reweighted.value - direct.value).abs() / (reweighted.se.hypot(direct.se));
            worst_z = worst_z.max(z);
            parts.push(format!("{}: {:.5} vs {:.5} (z={z:.2})", side.name(), reweighted.value, direct.value));
        }
        Ok((worst_z, 3.0, format!("largest z-score; {}", parts.join(", "))))
    }));
    out
}
