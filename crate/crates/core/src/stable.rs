//! α-stable parameter model, the two-sided exit law of the stable process,
//! the resolvent of the symmetric process killed on leaving (0, ∞), and an
//! exact-in-law increment sampler.
//!
//! Throughout, `rho` is P₀(X₁ < 0). With this convention the stable process
//! conditioned to stay positive is the h-transform with h(x) = x^{αρ}, the
//! spectrally negative case is α(1-ρ) = 1 and the spectrally positive case is
//! αρ = 1.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distributions::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gamma_pos, reg_incomplete_beta, Quadrature};

const BOUNDARY_TOL: f64 = 1e-12;

/// Index, negativity parameter and jump weights of a strictly α-stable process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    /// P₀(X₁ < 0).
    pub rho: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl StableParams {
    pub fn new(alpha: f64, rho: f64, c_plus: f64, c_minus: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Domain(format!("rho must lie in (0, 1), got {rho}")));
        }
        if !(c_plus >= 0.0 && c_minus >= 0.0 && c_plus.is_finite() && c_minus.is_finite()) {
            return Err(Error::Domain(format!(
                "jump weights must be nonnegative, got c+={c_plus}, c-={c_minus}"
            )));
        }
        Ok(Self { alpha, rho, c_plus, c_minus })
    }

    /// Two-sided jumps with unit jump weights.
    pub fn two_sided(alpha: f64, rho: f64) -> Result<Self> {
        let p = Self::new(alpha, rho, 1.0, 1.0)?;
        p.require_two_sided()?;
        Ok(p)
    }

    /// No positive jumps: α ∈ (1, 2) and α(1-ρ) = 1.
    pub fn spectrally_negative(alpha: f64, c_minus: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("one-sided jumps need alpha in (1, 2), got {alpha}")));
        }
        Self::new(alpha, 1.0 - 1.0 / alpha, 0.0, c_minus)
    }

    /// No negative jumps: α ∈ (1, 2) and αρ = 1.
    pub fn spectrally_positive(alpha: f64, c_plus: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("one-sided jumps need alpha in (1, 2), got {alpha}")));
        }
        Self::new(alpha, 1.0 / alpha, c_plus, 0.0)
    }

    /// αρ
    pub fn a_rho(&self) -> f64 {
        self.alpha * self.rho
    }

    /// α(1-ρ)
    pub fn a_rho_hat(&self) -> f64 {
        self.alpha * (1.0 - self.rho)
    }

    pub fn is_two_sided(&self) -> bool {
        self.a_rho() < 1.0 - BOUNDARY_TOL
            && self.a_rho_hat() < 1.0 - BOUNDARY_TOL
            && self.c_plus * self.c_minus > 0.0
    }

    pub fn is_spectrally_negative(&self) -> bool {
        self.alpha > 1.0 && (self.a_rho_hat() - 1.0).abs() <= BOUNDARY_TOL
    }

    pub fn is_spectrally_positive(&self) -> bool {
        self.alpha > 1.0 && (self.a_rho() - 1.0).abs() <= BOUNDARY_TOL
    }

    /// Parameters admissible for a strictly stable law: αρ ≤ 1 and α(1-ρ) ≤ 1.
    pub fn is_admissible(&self) -> bool {
        self.a_rho() <= 1.0 + BOUNDARY_TOL && self.a_rho_hat() <= 1.0 + BOUNDARY_TOL
    }

    pub fn require_two_sided(&self) -> Result<()> {
        if self.c_plus * self.c_minus <= 0.0 {
            return Err(Error::Domain(format!(
                "two-sided jumps require c+ c- > 0 (c+={}, c-={})",
                self.c_plus, self.c_minus
            )));
        }
        if !(self.a_rho() < 1.0 - BOUNDARY_TOL && self.a_rho_hat() < 1.0 - BOUNDARY_TOL) {
            return Err(Error::Domain(format!(
                "two-sided jumps require alpha*rho and alpha*(1-rho) in (0, 1), got {} and {}",
                self.a_rho(),
                self.a_rho_hat()
            )));
        }
        Ok(())
    }

    /// Either two-sided, or one of the spectrally one-sided boundaries.
    pub fn require_exit_law_domain(&self) -> Result<()> {
        if self.is_spectrally_negative() || self.is_spectrally_positive() {
            return Ok(());
        }
        self.require_two_sided()
    }

    /// The dual process -X: ρ ↔ 1-ρ and c₊ ↔ c₋.
    pub fn dual(&self) -> Self {
        Self { alpha: self.alpha, rho: 1.0 - self.rho, c_plus: self.c_minus, c_minus: self.c_plus }
    }
}

/// Which Lévy–Lamperti process: killed (`Star`), conditioned to stay
/// positive (`Up`) or conditioned to hit zero continuously (`Down`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LampertiKind {
    Star,
    Up,
    Down,
}

impl LampertiKind {
    /// Exponent γ in the Lévy density e^{γx} ν(e^x - 1).
    pub fn gamma_exponent(self, p: &StableParams) -> f64 {
        match self {
            LampertiKind::Star => 1.0,
            LampertiKind::Up => p.a_rho() + 1.0,
            LampertiKind::Down => p.a_rho(),
        }
    }

    /// Exponent of the Doob h-function x^{h} defining the conditioned law.
    pub fn h_exponent(self, p: &StableParams) -> f64 {
        self.gamma_exponent(p) - 1.0
    }

    /// Rate of the exponential killing of the underlying Lévy process.
    pub fn killing_rate(self, p: &StableParams) -> f64 {
        match self {
            LampertiKind::Star => p.c_minus / p.alpha,
            LampertiKind::Up | LampertiKind::Down => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LampertiKind::Star => "star",
            LampertiKind::Up => "up",
            LampertiKind::Down => "down",
        }
    }
}

impl std::str::FromStr for LampertiKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "star" | "killed" => Ok(LampertiKind::Star),
            "up" => Ok(LampertiKind::Up),
            "down" => Ok(LampertiKind::Down),
            other => Err(Error::Config(format!("unknown process kind '{other}'"))),
        }
    }
}

/// Lévy density of the Lévy–Lamperti process at x ≠ 0.
pub fn levy_density(kind: LampertiKind, p: &StableParams, x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let gamma = kind.gamma_exponent(p);
    let weight = if x > 0.0 { p.c_plus } else { p.c_minus };
    weight * (gamma * x).exp() / x.exp_m1().abs().powf(p.alpha + 1.0)
}

/// Density in y of the overshoot X_{σ⁺_a} - a on {σ⁺_a < σ⁻_0} for the stable
/// process started at x ∈ (0, a).
pub fn rogozin_overshoot_density(p: &StableParams, a: f64, x: f64, y: f64) -> Result<f64> {
    p.require_two_sided()?;
    if !(a > 0.0 && x > 0.0 && x < a) {
        return Err(Error::Domain(format!("need 0 < x < a, got x={x}, a={a}")));
    }
    if y <= 0.0 {
        return Ok(0.0);
    }
    let (ar, arh) = (p.a_rho(), p.a_rho_hat());
    let ln = arh * (a - x).ln() + ar * x.ln() - arh * y.ln() - ar * (y + a).ln() - (y + a - x).ln();
    Ok((PI * arh).sin() / PI * ln.exp())
}

/// Probability that the stable process started at x exits (0, a) upwards.
pub fn exit_up_probability(p: &StableParams, a: f64, x: f64) -> Result<f64> {
    p.require_two_sided()?;
    if !(a > 0.0 && x > 0.0 && x < a) {
        return Err(Error::Domain(format!("need 0 < x < a, got x={x}, a={a}")));
    }
    reg_incomplete_beta(p.a_rho(), p.a_rho_hat(), x / a)
}

/// Resolvent density of the symmetric α-stable process killed on leaving
/// (0, ∞), with an adjustable overall constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KilledResolvent {
    pub alpha: f64,
    pub kappa: f64,
}

impl KilledResolvent {
    /// Prefactor 1 / (2^α Γ(α/2)).
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("resolvent needs alpha in (1, 2), got {alpha}")));
        }
        Ok(Self { alpha, kappa: 1.0 / (2f64.powf(alpha) * gamma_pos(alpha / 2.0)) })
    }

    pub fn with_kappa(alpha: f64, kappa: f64) -> Result<Self> {
        let mut r = Self::new(alpha)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
        }
        r.kappa = kappa;
        Ok(r)
    }

    pub fn u(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!("resolvent needs x, y > 0, got x={x}, y={y}")));
        }
        let alpha = self.alpha;
        let a = alpha / 2.0;
        let d = (x - y).abs();
        let dpow = d.powf(alpha - 1.0);
        // With T = 4xy/(x-y)², |x-y|^{α-1} T^{(α-1)/2} = (4xy)^{(α-1)/2}, so the
        // divergent part of the integral is cancelled analytically.
        let inner = if d > 0.0 && 4.0 * x * y <= d * d {
            dpow * inner_integral_small(a, 4.0 * x * y / (d * d))
        } else {
            let lead = 2.0 / (alpha - 1.0);
            let head = (4.0 * x * y).powf((alpha - 1.0) / 2.0) * lead;
            if d == 0.0 {
                head
            } else {
                let t = 4.0 * x * y / (d * d);
                head + dpow * (inner_integral_small(a, 1.0) - lead + tail_correction(a, t.ln()))
            }
        };
        Ok(self.kappa * inner)
    }
}

/// ∫₀ᵀ t^{a-1} (1+t)^{-1/2} dt for T ≤ 1, via t = w^{1/a}.
fn inner_integral_small(a: f64, t_max: f64) -> f64 {
    let q = Quadrature::new(1e-15, 1e-13);
    let f = |w: f64| (1.0 + w.powf(1.0 / a)).powf(-0.5);
    q.integrate(f, 0.0, t_max.powf(a)).map(|r| r.value).unwrap_or(f64::NAN) / a
}

/// ∫₀^{ln T} e^{s(a-1/2)} [(1+e^{-s})^{-1/2} - 1] ds, the convergent remainder
/// of the integral over [1, T].
fn tail_correction(a: f64, ln_t: f64) -> f64 {
    let q = Quadrature::new(1e-15, 1e-13);
    let f = |s: f64| {
        ((a - 0.5) * s).exp() * (-0.5 * (-s).exp().ln_1p()).exp_m1()
    };
    q.integrate(f, 0.0, ln_t).map(|r| r.value).unwrap_or(f64::NAN)
}

/// u(x, y) for the symmetric process with the default prefactor.
pub fn killed_resolvent_u(alpha: f64, x: f64, y: f64) -> Result<f64> {
    KilledResolvent::new(alpha)?.u(x, y)
}

/// Exact sampler of X₁ by the Chambers–Mallows–Stuck construction, with the
/// skewness chosen so that P(X₁ < 0) = ρ. The scale is the one the
/// construction produces; first-exit laws of (X, P_x) do not depend on it.
#[derive(Debug, Clone, Copy)]
pub struct StableSampler {
    alpha: f64,
    shift: f64,
    inv_alpha: f64,
    exponent: f64,
}

impl StableSampler {
    pub fn new(p: &StableParams) -> Result<Self> {
        if (p.alpha - 1.0).abs() < 1e-12 && (p.rho - 0.5).abs() > 1e-12 {
            return Err(Error::Domain("asymmetric alpha = 1 is not supported".into()));
        }
        if !p.is_admissible() {
            return Err(Error::Domain(format!(
                "no stable law has alpha={} and rho={} (need alpha*rho <= 1 and alpha*(1-rho) <= 1)",
                p.alpha, p.rho
            )));
        }
        Ok(Self {
            alpha: p.alpha,
            // sign(X) = sign(V + shift) with V uniform on (-π/2, π/2).
            shift: PI * (0.5 - p.rho),
            inv_alpha: 1.0 / p.alpha,
            exponent: (1.0 - p.alpha) / p.alpha,
        })
    }

    /// Draw of X_dt - X_0 = dt^{1/α} X₁ in law.
    pub fn increment<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        dt.powf(self.inv_alpha) * self.sample(rng)
    }
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

impl Distribution<f64> for StableSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let v = PI * open_unit(rng) - FRAC_PI_2;
        let w = -open_unit(rng).ln();
        let arg = self.alpha * (v + self.shift);
        let cos_v = v.cos();
        arg.sin() / cos_v.powf(self.inv_alpha) * ((v - arg).cos() / w).powf(self.exponent)
    }
}

/// Convenience wrapper around [`StableSampler`].
pub fn sample_stable_increment<R: Rng + ?Sized>(p: &StableParams, dt: f64, rng: &mut R) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    Ok(StableSampler::new(p)?.increment(dt, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mass(p: &StableParams, a: f64, x: f64) -> f64 {
        let f = |y: f64| rogozin_overshoot_density(p, a, x, y).unwrap();
        integrate_adaptive(f, 0.0, a, 1e-11).unwrap().value
            + integrate_adaptive(f, a, f64::INFINITY, 1e-11).unwrap().value
    }

    #[test]
    fn overshoot_mass_equals_exit_probability_on_grid() {
        for alpha in [0.8, 1.2, 1.5, 1.8] {
            for rho in [0.3, 0.5, 0.7] {
                let Ok(p) = StableParams::two_sided(alpha, rho) else { continue };
                for xa in [0.1, 0.5, 0.9] {
                    let m = mass(&p, 2.0, 2.0 * xa);
                    let e = exit_up_probability(&p, 2.0, 2.0 * xa).unwrap();
                    assert!((m - e).abs() < 1e-6, "alpha={alpha} rho={rho} x/a={xa}: {m} vs {e}");
                }
            }
        }
    }

    #[test]
    fn start_near_barrier_exits_up() {
        let p = StableParams::two_sided(1.5, 0.5).unwrap();
        assert!((mass(&p, 1.0, 1.0 - 1e-7) - 1.0).abs() < 1e-3);
        assert!((exit_up_probability(&p, 1.0, 1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-6);
        assert!((exit_up_probability(&p, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dual_exit_probabilities_sum_to_one() {
        for (alpha, rho) in [(1.2, 0.3), (0.8, 0.7), (1.5, 0.45)] {
            let p = StableParams::two_sided(alpha, rho).unwrap();
            for x in [0.1, 0.35, 0.8] {
                let s = exit_up_probability(&p, 1.0, x).unwrap() + exit_up_probability(&p.dual(), 1.0, 1.0 - x).unwrap();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrally_positive_limit_of_overshoot_law() {
        // At αρ → 1 the process loses its negative jumps; its up-exit mass must
        // tend to 1 - ((a-x)/a)^{α-1}, the scale-function answer.
        let alpha = 1.5;
        let (a, x): (f64, f64) = (1.0, 0.4);
        let p = StableParams::new(alpha, 1.0 / alpha - 1e-7, 1.0, 1.0).unwrap();
        let want = 1.0 - ((a - x) / a).powf(alpha - 1.0);
        assert!((mass(&p, a, x) - want).abs() < 1e-5);
    }

    #[test]
    fn rejects_one_sided_and_bad_points() {
        let p = StableParams::spectrally_negative(1.5, 1.0).unwrap();
        assert!(rogozin_overshoot_density(&p, 1.0, 0.5, 0.2).is_err());
        let q = StableParams::two_sided(1.5, 0.5).unwrap();
        assert!(exit_up_probability(&q, 1.0, 1.2).is_err());
        assert!(StableParams::two_sided(1.5, 0.3).is_err());
        assert!(StableParams::new(2.0, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn kind_exponents() {
        let p = StableParams::two_sided(1.5, 0.4).unwrap();
        assert_eq!(LampertiKind::Star.gamma_exponent(&p), 1.0);
        assert!((LampertiKind::Up.gamma_exponent(&p) - 1.6).abs() < 1e-15);
        assert!((LampertiKind::Down.gamma_exponent(&p) - 0.6).abs() < 1e-15);
        assert!((LampertiKind::Star.killing_rate(&p) - 1.0 / 1.5).abs() < 1e-15);
        assert_eq!(LampertiKind::Up.killing_rate(&p), 0.0);
        // Esscher relation between the Lévy densities.
        for x in [-2.0, -0.1, 0.3, 4.0] {
            let r = levy_density(LampertiKind::Up, &p, x) / levy_density(LampertiKind::Down, &p, x);
            assert!((r / x.exp() - 1.0).abs() < 1e-13);
        }
    }

    /// Direct quadrature of the resolvent integral; independent of the
    /// analytic splitting used by the implementation.
    fn naive_u(alpha: f64, x: f64, y: f64) -> f64 {
        let t = 4.0 * x * y / ((x - y) * (x - y));
        let a = alpha / 2.0;
        let f = |s: f64| (a * s).exp() * (1.0 + s.exp()).powf(-0.5);
        let q = Quadrature::new(0.0, 1e-13);
        let head = q.integrate(|w: f64| (1.0 + w.powf(1.0 / a)).powf(-0.5), 0.0, t.min(1.0).powf(a)).unwrap().value / a;
        let tail = if t > 1.0 { q.integrate(f, 0.0, t.ln()).unwrap().value } else { 0.0 };
        (head + tail) * (x - y).abs().powf(alpha - 1.0) / (2f64.powf(alpha) * gamma_pos(a))
    }

    #[test]
    fn resolvent_matches_direct_quadrature_and_is_symmetric() {
        for alpha in [1.2, 1.5, 1.8] {
            for (x, y) in [(0.5, 1.0), (1.0, 2.0), (0.5, 2.0), (3.0, 0.1), (1.0, 1.3)] {
                let u = killed_resolvent_u(alpha, x, y).unwrap();
                let v = killed_resolvent_u(alpha, y, x).unwrap();
                let n = naive_u(alpha, x, y);
                assert!(u > 0.0);
                assert!((u - v).abs() <= 1e-14 * u);
                assert!((u - n).abs() < 1e-10 * n, "alpha={alpha} ({x},{y}): {u} vs {n}");
            }
        }
    }

    #[test]
    fn resolvent_scaling() {
        let (alpha, lambda) = (1.5, 3.7);
        for (x, y) in [(0.5, 1.0), (1.0, 2.0), (0.2, 0.21)] {
            let lhs = killed_resolvent_u(alpha, lambda * x, lambda * y).unwrap();
            let rhs = lambda.powf(alpha - 1.0) * killed_resolvent_u(alpha, x, y).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn resolvent_diagonal_matches_numerical_limit() {
        for alpha in [1.2, 1.5, 1.8] {
            let x = 0.8;
            let diag = killed_resolvent_u(alpha, x, x).unwrap();
            // Symmetric difference cancels the O(ε) term; Richardson removes
            // the leading |ε|^{α-1} singular term.
            let g = |e: f64| 0.5 * (naive_u(alpha, x, x * (1.0 + e)) + naive_u(alpha, x, x * (1.0 - e)));
            let (e1, e2) = (1e-3, 5e-4);
            let r = 2f64.powf(alpha - 1.0);
            let extrap = (r * g(e2) - g(e1)) / (r - 1.0);
            assert!((extrap - diag).abs() < 1e-6 * diag, "alpha={alpha}: {extrap} vs {diag}");
        }
    }

    #[test]
    fn inner_integral_increases_with_upper_limit() {
        let a = 0.75;
        let mut prev = 0.0;
        for t in [0.01, 0.1, 0.5, 1.0] {
            let v = inner_integral_small(a, t);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn sampler_sign_balance() {
        let p = StableParams::two_sided(1.5, 0.4).unwrap();
        let s = StableSampler::new(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| s.sample(&mut rng).signum()).sum::<f64>() / n as f64;
        let want = 1.0 - 2.0 * p.rho;
        let se = (1.0 - want * want).sqrt() / (n as f64).sqrt();
        assert!((mean - want).abs() < 3.0 * se, "{mean} vs {want}");
    }

    #[test]
    fn sampler_symmetric_median() {
        let p = StableParams::two_sided(1.2, 0.5).unwrap();
        let s = StableSampler::new(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 200_001;
        let mut v: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
        v.sort_by(f64::total_cmp);
        let median = v[n / 2];
        // Density at 0 is O(1); 3 standard errors of the median.
        assert!(median.abs() < 3.0 * 0.5 / (n as f64).sqrt() / 0.25);
    }

    #[test]
    fn sampler_self_similarity() {
        let p = StableParams::two_sided(1.5, 0.45).unwrap();
        let s = StableSampler::new(&p).unwrap();
        let dt = 0.01;
        let mut r1 = ChaCha8Rng::seed_from_u64(1);
        let mut r2 = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let mut a: Vec<f64> = (0..n).map(|_| s.increment(dt, &mut r1)).collect();
        let mut b: Vec<f64> = (0..n).map(|_| dt.powf(1.0 / p.alpha) * s.sample(&mut r2)).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0, 0, 0.0f64);
        while i < n && j < n {
            if a[i] <= b[j] { i += 1 } else { j += 1 }
            d = d.max((i as f64 - j as f64).abs() / n as f64);
        }
        assert!(d < 0.01, "two-sample KS {d}");
    }

    #[test]
    fn sampler_rejects_unsupported() {
        assert!(StableSampler::new(&StableParams::new(1.0, 0.3, 1.0, 1.0).unwrap()).is_err());
        assert!(StableSampler::new(&StableParams::new(1.5, 0.2, 1.0, 1.0).unwrap()).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_stable_increment(&StableParams::two_sided(1.5, 0.5).unwrap(), 0.0, &mut rng).is_err());
    }

    #[test]
    fn resolvent_finite_and_continuous_near_diagonal() {
        for alpha in [1.1, 1.5, 1.9] {
            let r = KilledResolvent::new(alpha).unwrap();
            let on = r.u(1.0, 1.0).unwrap();
            for k in 1..=14 {
                let e = 10f64.powi(-k);
                let gap = on - r.u(1.0 + e, 1.0).unwrap();
                assert!(gap.is_finite() && gap >= -1e-14, "alpha={alpha} eps={e}: {gap}");
            }
        }
    }

}
