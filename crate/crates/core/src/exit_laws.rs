//! First-exit laws of the Lévy–Lamperti processes ξ↑, ξ* and ξ↓ from an
//! interval (v, u) around the origin, their one-sided limits and the laws of
//! their extrema.
//!
//! All six two-sided densities come from one kernel. With E = e^{u+θ} the
//! upward overshoot density is
//!
//! ```text
//! sin(πα(1-ρ))/π (e^u-1)^{α(1-ρ)} (1-e^v)^{αρ} E^γ (E-e^u)^{-α(1-ρ)} (E-e^v)^{-αρ} (E-1)^{-1}
//! ```
//!
//! and the kinds differ only by γ (see [`LampertiKind::gamma_exponent`]), so
//! the Esscher ratios between kinds hold to rounding.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gamma_pos, sin_pi, Quadrature};
use crate::stable::{LampertiKind, StableParams};

/// Exit window v < 0 < u in the logarithmic scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitWindow {
    pub v: f64,
    pub u: f64,
}

impl ExitWindow {
    pub fn new(v: f64, u: f64) -> Result<Self> {
        if !(v < 0.0 && u > 0.0 && v.is_finite() && u.is_finite()) {
            return Err(Error::Domain(format!("exit window needs v < 0 < u, got v={v}, u={u}")));
        }
        Ok(Self { v, u })
    }
}

/// Barriers of an exit problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Window {
    TwoSided(ExitWindow),
    /// Upper barrier u > 0 only (v = -∞).
    Above(f64),
    /// Lower barrier v < 0 only (u = +∞).
    Below(f64),
}

impl Window {
    fn validate(&self) -> Result<()> {
        match *self {
            Window::TwoSided(w) => ExitWindow::new(w.v, w.u).map(|_| ()),
            Window::Above(u) if u > 0.0 && u.is_finite() => Ok(()),
            Window::Below(v) if v < 0.0 && v.is_finite() => Ok(()),
            other => Err(Error::Domain(format!("invalid barrier {other:?}"))),
        }
    }

    fn upper(&self) -> Option<f64> {
        match *self {
            Window::TwoSided(w) => Some(w.u),
            Window::Above(u) => Some(u),
            Window::Below(_) => None,
        }
    }

    fn lower(&self) -> Option<f64> {
        match *self {
            Window::TwoSided(w) => Some(w.v),
            Window::Below(v) => Some(v),
            Window::Above(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            other => Err(Error::Config(format!("unknown direction '{other}'"))),
        }
    }
}

/// Point at which an exit density is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitLawQuery {
    pub kind: LampertiKind,
    pub params: StableParams,
    pub window: Window,
    pub direction: Direction,
    /// Overshoot beyond the barrier, in the logarithmic scale.
    pub theta: f64,
}

/// ln(1 - e^x) for x < 0.
fn ln_one_minus_exp(x: f64) -> f64 {
    (-x.exp_m1()).ln()
}

/// Kernel shared by every exit density. `v = None` / `u = None` selects the
/// corresponding one-sided limit.
fn kernel(p: &StableParams, gamma: f64, v: Option<f64>, u: Option<f64>, direction: Direction, theta: f64) -> f64 {
    let (ar, arh) = (p.a_rho(), p.a_rho_hat());
    if theta == 0.0 {
        return f64::INFINITY;
    }
    match direction {
        Direction::Up => {
            let u = u.expect("upper barrier");
            let s = sin_pi(arh);
            if p.is_spectrally_negative() || s <= 0.0 {
                return 0.0;
            }
            let e = u + theta;
            let mut ln = (s / PI).ln() + arh * u.exp_m1().ln() + gamma * e
                - arh * (u + theta.exp_m1().ln())
                - e.exp_m1().ln();
            match v {
                Some(v) => ln += ar * ln_one_minus_exp(v) - ar * (v + (e - v).exp_m1().ln()),
                None => ln -= ar * e,
            }
            ln.exp()
        }
        Direction::Down => {
            let v = v.expect("lower barrier");
            let s = sin_pi(ar);
            if p.is_spectrally_positive() || s <= 0.0 {
                return 0.0;
            }
            let e = v - theta;
            let mut ln = (s / PI).ln() + ar * ln_one_minus_exp(v) + gamma * e
                - ar * (v + ln_one_minus_exp(-theta))
                - ln_one_minus_exp(e);
            if let Some(u) = u {
                ln += arh * u.exp_m1().ln() - arh * (u + ln_one_minus_exp(e - u));
            }
            ln.exp()
        }
    }
}

fn check_query(q: &ExitLawQuery) -> Result<()> {
    q.params.require_exit_law_domain()?;
    q.window.validate()?;
    if !(q.theta >= 0.0) {
        return Err(Error::Domain(format!("overshoot must be nonnegative, got {}", q.theta)));
    }
    Ok(())
}

/// Density in θ of the overshoot beyond u (direction Up) or below v (direction
/// Down) when the process leaves (v, u) through that side.
pub fn exit_density_two_sided(q: &ExitLawQuery) -> Result<f64> {
    check_query(q)?;
    let Window::TwoSided(w) = q.window else {
        return Err(Error::Domain("two-sided density needs a two-sided window".into()));
    };
    let gamma = q.kind.gamma_exponent(&q.params);
    Ok(kernel(&q.params, gamma, Some(w.v), Some(w.u), q.direction, q.theta))
}

/// Overshoot density with a single barrier: above u (v = -∞) for direction
/// Up, below v (u = +∞) for direction Down.
pub fn exit_density_one_sided(q: &ExitLawQuery) -> Result<f64> {
    check_query(q)?;
    let gamma = q.kind.gamma_exponent(&q.params);
    match (q.window, q.direction) {
        (Window::Above(u), Direction::Up) => Ok(kernel(&q.params, gamma, None, Some(u), Direction::Up, q.theta)),
        (Window::Below(v), Direction::Down) => Ok(kernel(&q.params, gamma, Some(v), None, Direction::Down, q.theta)),
        _ => Err(Error::Domain("one-sided density needs a barrier on the side of exit".into())),
    }
}

/// Dispatch on the window.
pub fn exit_density(q: &ExitLawQuery) -> Result<f64> {
    match q.window {
        Window::TwoSided(_) => exit_density_two_sided(q),
        _ => exit_density_one_sided(q),
    }
}

/// Probability of leaving through one side, split into a jump part (the
/// integral of the overshoot density) and a creeping part (an atom at θ = 0,
/// nonzero only for spectrally one-sided parameters).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SideMass {
    pub overshoot: f64,
    pub creeping: f64,
}

impl SideMass {
    pub fn total(&self) -> f64 {
        self.overshoot + self.creeping
    }
}

fn integrate_overshoot<F: Fn(f64) -> f64>(density: F, singular_exponent: f64) -> Result<f64> {
    // θ = s^{1/(1-β)} turns the θ^{-β} endpoint singularity into a bounded integrand.
    let beta = singular_exponent;
    let q = Quadrature::new(1e-13, 1e-12).with_max_segments(4000);
    let pw = 1.0 / (1.0 - beta);
    let head = q.integrate(|s: f64| if s <= 0.0 { 0.0 } else { density(s.powf(pw)) * pw * s.powf(pw - 1.0) }, 0.0, 1.0)?;
    let tail = q.integrate(&density, 1.0, f64::INFINITY)?;
    Ok(head.value + tail.value)
}

/// Mass of the exit through `direction`, including creeping for spectrally
/// one-sided parameters.
pub fn exit_mass(kind: LampertiKind, p: &StableParams, window: Window, direction: Direction) -> Result<SideMass> {
    let probe = ExitLawQuery { kind, params: *p, window, direction, theta: 1.0 };
    check_query(&probe)?;
    let (upper, lower) = (window.upper(), window.lower());
    match direction {
        Direction::Up if upper.is_none() => return Ok(SideMass::default()),
        Direction::Down if lower.is_none() => return Ok(SideMass::default()),
        _ => {}
    }
    let h = kind.h_exponent(p);
    let alpha = p.alpha;
    if direction == Direction::Up && p.is_spectrally_negative() {
        // No upward jumps: the upper barrier is crept over. The chance that the
        // stable process reaches e^u before going below e^v (or 0) is a ratio
        // of the scale function x^{α-1}.
        let u = upper.unwrap();
        let ev = lower.map_or(0.0, f64::exp);
        let p_up = ((1.0 - ev) / (u.exp() - ev)).powf(alpha - 1.0);
        return Ok(SideMass { overshoot: 0.0, creeping: (h * u).exp() * p_up });
    }
    if direction == Direction::Down && p.is_spectrally_positive() {
        let v = lower.unwrap();
        let p_down = match upper {
            Some(u) => ((u.exp() - 1.0) / (u.exp() - v.exp())).powf(alpha - 1.0),
            None => 1.0,
        };
        return Ok(SideMass { overshoot: 0.0, creeping: (h * v).exp() * p_down });
    }
    let beta = match direction {
        Direction::Up => p.a_rho_hat(),
        Direction::Down => p.a_rho(),
    };
    let gamma = kind.gamma_exponent(p);
    let overshoot = integrate_overshoot(|t| kernel(p, gamma, lower, upper, direction, t), beta)?;
    Ok(SideMass { overshoot, creeping: 0.0 })
}

/// P(θ ≤ theta | exit through `direction`): the overshoot law conditioned on
/// the side of exit, for two-sided-jump parameters.
pub fn overshoot_cdf(kind: LampertiKind, p: &StableParams, window: Window, direction: Direction, theta: f64) -> Result<f64> {
    let probe = ExitLawQuery { kind, params: *p, window, direction, theta: 1.0 };
    check_query(&probe)?;
    p.require_two_sided()?;
    if !(theta >= 0.0) {
        return Err(Error::Domain(format!("overshoot must be nonnegative, got {theta}")));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    let (upper, lower) = (window.upper(), window.lower());
    if (direction == Direction::Up && upper.is_none()) || (direction == Direction::Down && lower.is_none()) {
        return Err(Error::Domain("no barrier on the side of exit".into()));
    }
    let beta = match direction {
        Direction::Up => p.a_rho_hat(),
        Direction::Down => p.a_rho(),
    };
    let gamma = kind.gamma_exponent(p);
    let density = |t: f64| kernel(p, gamma, lower, upper, direction, t);
    let total = integrate_overshoot(density, beta)?;
    if theta.is_infinite() {
        return Ok(1.0);
    }
    let pw = 1.0 / (1.0 - beta);
    let q = Quadrature::new(1e-13, 1e-12).with_max_segments(4000);
    let s_max = theta.powf(1.0 - beta);
    let head = q.integrate(|s: f64| if s <= 0.0 { 0.0 } else { density(s.powf(pw)) * pw * s.powf(pw - 1.0) }, 0.0, s_max)?;
    Ok((head.value / total).clamp(0.0, 1.0))
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("level must be nonnegative, got {z}")));
    }
    Ok(())
}

/// P(-inf ξ↑ ≤ z) = (1 - e^{-z})^{αρ}.
pub fn min_cdf_up(p: &StableParams, z: f64) -> Result<f64> {
    p.require_exit_law_domain()?;
    check_z(z)?;
    Ok((-(-z).exp_m1()).powf(p.a_rho()))
}

/// P(sup ξ↓ ≤ z) = (1 - e^{-z})^{α(1-ρ)}.
pub fn max_cdf_down(p: &StableParams, z: f64) -> Result<f64> {
    p.require_exit_law_domain()?;
    check_z(z)?;
    Ok((-(-z).exp_m1()).powf(p.a_rho_hat()))
}

/// Which extremum of ξ* over its lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extremum {
    /// sup ξ*
    Max,
    /// -inf ξ*
    Min,
}

/// Formula variant for the extrema of ξ*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ExtremaFormula {
    /// Derived from the two-sided exit probability of the stable process.
    #[default]
    Derived,
    /// The closed forms in their commonly quoted form, kept for comparison.
    /// The maximum swaps αρ and α(1-ρ) relative to the derived law (they agree
    /// at ρ = 1/2); the minimum is not a probability density.
    AsPrinted,
}

fn beta_fn(a: f64, b: f64) -> f64 {
    gamma_pos(a) * gamma_pos(b) / gamma_pos(a + b)
}

/// Density of sup ξ* or -inf ξ* at z > 0.
pub fn extrema_density_star(p: &StableParams, z: f64, which: Extremum, formula: ExtremaFormula) -> Result<f64> {
    p.require_two_sided()?;
    check_z(z)?;
    if z == 0.0 {
        return Ok(f64::INFINITY);
    }
    let (ar, arh) = (p.a_rho(), p.a_rho_hat());
    let one_minus = -(-z).exp_m1();
    match (which, formula) {
        (Extremum::Max, ExtremaFormula::Derived) => {
            Ok((-z * ar).exp() * one_minus.powf(arh - 1.0) / beta_fn(arh, ar))
        }
        (Extremum::Max, ExtremaFormula::AsPrinted) => {
            Ok((-z * arh).exp() * one_minus.powf(ar - 1.0) / beta_fn(ar, arh))
        }
        (Extremum::Min, ExtremaFormula::Derived) => min_star_density(p, z),
        (Extremum::Min, ExtremaFormula::AsPrinted) => {
            Ok(z.exp_m1().powf(ar) / (gamma_pos(ar) * gamma_pos(1.0 - ar)))
        }
    }
}

/// Distribution function of sup ξ* or -inf ξ* (derived laws).
pub fn extrema_cdf_star(p: &StableParams, z: f64, which: Extremum) -> Result<f64> {
    p.require_two_sided()?;
    check_z(z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    match which {
        // Below e^z before being killed: 1 - P₁(up before 0) with a = e^z.
        Extremum::Max => crate::numerics::reg_incomplete_beta(p.a_rho_hat(), p.a_rho(), -(-z).exp_m1()),
        Extremum::Min => Ok(min_star_law(p, z)?.0),
    }
}

/// P(-inf ξ* ≤ z) and its derivative in z.
///
/// For b = e^{-z}, the probability of going below -z before being killed is
/// M(b) = sin(παρ)/π (1-b)^{αρ} b^{1-αρ} ∫₀¹ (1-t)^{-αρ} (1-bt)^{-1} dt,
/// t locating the landing point e^{-z} t. Splitting the integral at infinity
/// gives, with ε = e^z - 1,
/// 1 - M = sin(παρ)/π ε^{αρ} R(ε),  R(ε) = (1/αρ) ∫₀¹ (1 + ε s^{1/αρ})^{-1} ds,
/// which is used for small z; the b-form is used for large z.
fn min_star_law(p: &StableParams, z: f64) -> Result<(f64, f64)> {
    let ar = p.a_rho();
    let c = sin_pi(ar) / PI;
    let q = Quadrature::new(1e-16, 1e-13).with_max_segments(4000);
    if z <= 1.0 {
        let eps = z.exp_m1();
        let k = 1.0 / ar;
        let r0 = q.integrate(|s: f64| 1.0 / (1.0 + eps * s.powf(k)), 0.0, 1.0)?.value / ar;
        let r1 = -q
            .integrate(
                |s: f64| {
                    let w = s.powf(k);
                    w / ((1.0 + eps * w) * (1.0 + eps * w))
                },
                0.0,
                1.0,
            )?
            .value
            / ar;
        let cdf = c * eps.powf(ar) * r0;
        let dens = c * z.exp() * (ar * eps.powf(ar - 1.0) * r0 + eps.powf(ar) * r1);
        return Ok((cdf, dens));
    }
    let b = (-z).exp();
    if b < 1e-300 {
        return Ok((1.0, 0.0));
    }
    // s = (1-t)^{1-αρ} removes the endpoint singularity.
    let k = 1.0 / (1.0 - ar);
    let j0 = q.integrate(|s: f64| k / (1.0 - b * (1.0 - s.powf(k))), 0.0, 1.0)?.value;
    let j1 = q
        .integrate(
            |s: f64| {
                let t = 1.0 - s.powf(k);
                k * t / ((1.0 - b * t) * (1.0 - b * t))
            },
            0.0,
            1.0,
        )?
        .value;
    let omb = -(-z).exp_m1();
    let m = c * omb.powf(ar) * b.powf(1.0 - ar) * j0;
    let dm = c * (-ar * omb.powf(ar - 1.0) * b.powf(1.0 - ar) * j0
        + (1.0 - ar) * omb.powf(ar) * b.powf(-ar) * j0
        + omb.powf(ar) * b.powf(1.0 - ar) * j1);
    // d/dz (1 - M(e^{-z})) = b M'(b)
    Ok((1.0 - m, b * dm))
}

fn min_star_density(p: &StableParams, z: f64) -> Result<f64> {
    Ok(min_star_law(p, z)?.1)
}
