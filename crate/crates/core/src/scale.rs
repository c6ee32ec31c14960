//! Scale functions, Laplace exponents, ruin probabilities and first-passage
//! triple laws for the spectrally one-sided Lévy–Lamperti processes:
//! ξ↑ with no positive jumps (`UpNeg`), ξ↓ with no positive jumps (`DownNeg`)
//! and ξ↓ with no negative jumps (`DownPos`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gamma_pos, lgamma, recip_gamma, sin_pi, Quadrature};
use crate::stable::StableParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScaleCase {
    UpNeg,
    DownNeg,
    DownPos,
}

impl std::str::FromStr for ScaleCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "upneg" => Ok(ScaleCase::UpNeg),
            "downneg" => Ok(ScaleCase::DownNeg),
            "downpos" => Ok(ScaleCase::DownPos),
            other => Err(Error::Config(format!("unknown spectral case '{other}'"))),
        }
    }
}

/// A spectrally one-sided case with its normalization m > 0 and, for the
/// `DownNeg` triple law, the killing rate of the descending ladder height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralCase {
    pub case: ScaleCase,
    pub alpha: f64,
    pub m: f64,
    pub q_ladder: Option<f64>,
}

/// c = c_± Γ(2-α) / (α(α-1)), the coefficient of λ^α in the Laplace exponent
/// of the one-sided stable process with jump weight c_±.
pub fn laplace_coefficient(alpha: f64, jump_weight: f64) -> f64 {
    jump_weight * gamma_pos(2.0 - alpha) / (alpha * (alpha - 1.0))
}

impl SpectralCase {
    pub fn new(case: ScaleCase, alpha: f64, m: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("spectrally one-sided cases need alpha in (1, 2), got {alpha}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Domain(format!("normalization m must be positive, got {m}")));
        }
        Ok(Self { case, alpha, m, q_ladder: None })
    }

    /// Case built from stable parameters, with the default m = c Γ(α).
    pub fn from_params(case: ScaleCase, p: &StableParams) -> Result<Self> {
        let weight = match case {
            ScaleCase::UpNeg | ScaleCase::DownNeg => {
                if !p.is_spectrally_negative() {
                    return Err(Error::Domain(format!("{case:?} needs alpha*(1-rho) = 1, got {}", p.a_rho_hat())));
                }
                p.c_minus
            }
            ScaleCase::DownPos => {
                if !p.is_spectrally_positive() {
                    return Err(Error::Domain(format!("{case:?} needs alpha*rho = 1, got {}", p.a_rho())));
                }
                p.c_plus
            }
        };
        let c = laplace_coefficient(p.alpha, weight);
        Self::new(case, p.alpha, c * gamma_pos(p.alpha))
    }

    pub fn with_q_ladder(mut self, q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Domain(format!("ladder killing rate must be positive, got {q}")));
        }
        self.q_ladder = Some(q);
        Ok(self)
    }
}

/// m Γ(t+α) / (Γ(t)Γ(α)) for real t > -α.
fn psi_shifted(s: &SpectralCase, t: f64) -> f64 {
    let a = s.alpha;
    s.m * (lgamma(t + a) - lgamma(a)).exp() * recip_gamma(t)
}

/// Laplace exponent ψ↑(θ) = m Γ(θ+α) / (Γ(θ)Γ(α)) of ξ↑ without positive jumps.
pub fn psi_up(s: &SpectralCase, theta: f64) -> Result<f64> {
    if s.case != ScaleCase::UpNeg {
        return Err(Error::Domain("psi_up is defined for the UpNeg case".into()));
    }
    if !(theta >= 0.0) {
        return Err(Error::Domain(format!("theta must be nonnegative, got {theta}")));
    }
    Ok(psi_shifted(s, theta))
}

/// Laplace exponent ψ↓(θ) = ψ↑(θ-1) of ξ↓ without positive jumps; vanishes at
/// θ = 0 and θ = 1.
pub fn psi_down(s: &SpectralCase, theta: f64) -> Result<f64> {
    if s.case != ScaleCase::DownNeg {
        return Err(Error::Domain("psi_down is defined for the DownNeg case".into()));
    }
    if !(theta >= 0.0) {
        return Err(Error::Domain(format!("theta must be nonnegative, got {theta}")));
    }
    Ok(psi_shifted(s, theta - 1.0))
}

/// Scale function W(x).
pub fn scale_fn(s: &SpectralCase, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("scale function needs x >= 0, got {x}")));
    }
    let base = (-(-x).exp_m1()).powf(s.alpha - 1.0) / s.m;
    Ok(match s.case {
        ScaleCase::UpNeg | ScaleCase::DownPos => base,
        ScaleCase::DownNeg => x.exp() * base,
    })
}

/// P(the process reaches y before going below -x) = W(x) / W(x+y).
pub fn ruin_probability(s: &SpectralCase, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("ruin probability needs x, y > 0, got x={x}, y={y}")));
    }
    let a = s.alpha - 1.0;
    // Ratio of (1-e^{-x})^{α-1} terms, in logs to survive large y.
    let ln = a * ((-(-x).exp_m1()).ln() - (-(-(x + y)).exp_m1()).ln());
    Ok(match s.case {
        ScaleCase::UpNeg | ScaleCase::DownPos => ln.exp(),
        ScaleCase::DownNeg => (ln - y).exp(),
    })
}

/// Point of a first-passage triple law: overshoot θ, distance φ of the
/// pre-passage position from the barrier and distance η of the pre-passage
/// extremum from the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleLawPoint {
    /// v < 0 for `UpNeg`/`DownNeg` (passage below v); x > 0 for `DownPos`
    /// (passage above x).
    pub barrier: f64,
    pub theta: f64,
    pub phi: f64,
    pub eta: f64,
}

fn barrier_length(s: &SpectralCase, barrier: f64) -> Result<f64> {
    let ok = match s.case {
        ScaleCase::UpNeg | ScaleCase::DownNeg => barrier < 0.0,
        ScaleCase::DownPos => barrier > 0.0,
    };
    if !ok || !barrier.is_finite() {
        return Err(Error::Domain(format!("barrier {barrier} is on the wrong side for {:?}", s.case)));
    }
    if s.case == ScaleCase::DownNeg && s.q_ladder.is_none() {
        return Err(Error::Config("the DownNeg triple law needs q_ladder".into()));
    }
    Ok(barrier.abs())
}

/// Weight in η coming from the scale-function measure W(L - dη), L = |barrier|,
/// as a function of the distance d = L - η.
fn eta_weight(s: &SpectralCase, d: f64) -> f64 {
    let a = s.alpha;
    // e^{v+η} = e^{-d}
    let e = (-d).exp();
    let base = (-(-d).exp_m1()).powf(a - 2.0);
    match s.case {
        ScaleCase::UpNeg | ScaleCase::DownPos => base * e,
        ScaleCase::DownNeg => base * (1.0 / e + a - 2.0),
    }
}

/// Jump weight in s = θ + φ, e^{-αs}(1-e^{-s})^{-1-α}. For `DownPos` the
/// printed form e^{s}(e^{s}-1)^{-1-α} is algebraically the same.
fn jump_weight(alpha: f64, s: f64) -> f64 {
    (-alpha * s).exp() * (-(-s).exp_m1()).powf(-1.0 - alpha)
}

fn ladder_factor(s: &SpectralCase, phi: f64, eta: f64) -> f64 {
    match (s.case, s.q_ladder) {
        (ScaleCase::DownNeg, Some(q)) => (-q * (phi - eta)).exp(),
        _ => 1.0,
    }
}

/// Unnormalized triple-law density.
pub fn triple_law_kernel(s: &SpectralCase, pt: &TripleLawPoint) -> Result<f64> {
    let len = barrier_length(s, pt.barrier)?;
    if !(pt.theta >= 0.0 && pt.eta >= 0.0 && pt.eta <= len && pt.phi >= pt.eta) {
        return Err(Error::Domain(format!("triple-law point outside its domain: {pt:?}")));
    }
    Ok(eta_weight(s, len - pt.eta) * ladder_factor(s, pt.phi, pt.eta) * jump_weight(s.alpha, pt.theta + pt.phi))
}

/// Normalizing constant K: the integral of the kernel over θ ≥ 0, φ ≥ η,
/// η ∈ [0, |barrier|], by nested three-dimensional adaptive quadrature.
pub fn triple_law_k(s: &SpectralCase, barrier: f64) -> Result<f64> {
    let len = barrier_length(s, barrier)?;
    let a = s.alpha;
    let inner = Quadrature::new(1e-300, 1e-11).with_max_segments(400);
    let theta_integral = |phi: f64| -> f64 {
        // Peak at θ = 0 of width φ: split there.
        let g = |t: f64| jump_weight(a, t + phi);
        let head = inner.integrate(g, 0.0, phi).map(|r| r.value).unwrap_or(f64::NAN);
        let tail = inner.integrate(g, phi, f64::INFINITY).map(|r| r.value).unwrap_or(f64::NAN);
        head + tail
    };
    phi_eta_integral(s, len, &theta_integral)
}

/// Outer two integrals given the θ-integral as a function of φ.
fn phi_eta_integral<G: Fn(f64) -> f64 + Sync>(s: &SpectralCase, len: f64, theta_integral: &G) -> Result<f64> {
    let a = s.alpha;
    let mid = Quadrature::new(1e-300, 1e-10).with_max_segments(400);
    let outer = Quadrature::new(1e-300, 1e-9).with_max_segments(400);
    let phi_integral = |eta: f64| -> f64 {
        let h = |phi: f64| ladder_factor(s, phi, eta) * theta_integral(phi);
        if eta <= 0.0 {
            return f64::INFINITY;
        }
        // φ = η e^t spreads the φ^{-α} spike at φ = η.
        let near = mid
            .integrate(|t: f64| {
                let phi = eta * t.exp();
                h(phi) * phi
            }, 0.0, (1.0 + 1.0 / eta).ln())
            .map(|r| r.value)
            .unwrap_or(f64::NAN);
        let far = mid.integrate(h, eta + 1.0, f64::INFINITY).map(|r| r.value).unwrap_or(f64::NAN);
        near + far
    };
    let f = |eta: f64, d: f64| eta_weight(s, d) * phi_integral(eta);
    let r = outer.integrate_power_ends(f, 0.0, len, 1.0 - a, a - 2.0)?;
    if !r.value.is_finite() {
        return Err(Error::Numeric("triple-law normalization is not finite".into()));
    }
    Ok(r.value)
}

/// K by a reduced route: the θ-integral in closed form,
/// ∫_φ^∞ e^{-αs}(1-e^{-s})^{-1-α} ds = (e^φ - 1)^{-α} / α.
pub fn triple_law_k_reduced(s: &SpectralCase, barrier: f64) -> Result<f64> {
    let len = barrier_length(s, barrier)?;
    let a = s.alpha;
    phi_eta_integral(s, len, &|phi: f64| phi.exp_m1().powf(-a) / a)
}

/// Triple-law density K⁻¹ × kernel.
pub fn triple_law_density(s: &SpectralCase, pt: &TripleLawPoint) -> Result<f64> {
    let kernel = triple_law_kernel(s, pt)?;
    Ok(kernel / triple_law_k(s, pt.barrier)?)
}

/// Closed-form expression for K as commonly quoted alongside these laws,
/// evaluated for comparison with the quadrature. For `DownPos` the barrier v
/// is read as -x; for `DownNeg` the expression contains e^{+q(φ-η)} and may
/// diverge, in which case an error is returned.
pub fn triple_law_k_printed(s: &SpectralCase, barrier: f64) -> Result<f64> {
    let len = barrier_length(s, barrier)?;
    let a = s.alpha;
    let v = -len;
    let q = Quadrature::new(1e-300, 1e-10).with_max_segments(2000);
    match s.case {
        ScaleCase::UpNeg | ScaleCase::DownPos => {
            let top = (-v).exp();
            let integral = q.integrate_power_ends(|y: f64, d: f64| d / (y * (y - 1.0).powf(a - 1.0)), 1.0, top, 1.0 - a, 1.0)?;
            Ok(((a - 2.0) * v).exp() / (a * (a - 1.0)) * integral.value
                - (-v.exp_m1()).powf(a - 1.0) / (a * (a - 1.0)) * std::f64::consts::PI / sin_pi(a - 1.0))
        }
        ScaleCase::DownNeg => {
            let ql = s.q_ladder.expect("checked by barrier_length");
            if ql >= a {
                return Err(Error::Numeric(format!(
                    "printed normalization diverges: e^{{q(φ-η)}} grows faster than (e^φ-1)^{{-α}} decays (q={ql} >= alpha={a})"
                )));
            }
            let weight = |d: f64| ((-d).exp().recip() + a - 2.0) * (-(-d).exp_m1()).powf(a - 2.0);
            let inner = Quadrature::new(1e-300, 1e-10).with_max_segments(400);
            let f = |eta: f64, d: f64| {
                let h = |phi: f64| (-ql * (eta - phi) - a * phi.exp_m1().ln()).exp();
                let near = inner
                    .integrate(|t: f64| {
                        let phi = eta * t.exp();
                        h(phi) * phi
                    }, 0.0, (1.0 + 1.0 / eta).ln())
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN);
                let far = inner.integrate(h, eta + 1.0, f64::INFINITY).map(|r| r.value).unwrap_or(f64::NAN);
                weight(d) * (near + far)
            };
            Ok(q.integrate_power_ends(f, 0.0, len, 1.0 - a, a - 2.0)?.value / a)
        }
    }
}

/// Result of comparing the quadrature normalization with the closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleLawCrossCheck {
    pub k_quadrature: f64,
    pub k_reduced: f64,
    pub k_printed: Option<f64>,
    pub printed_note: Option<String>,
    /// |k_printed / k_quadrature - 1| < 1e-6
    pub printed_agrees: bool,
}

pub fn triple_law_cross_check(s: &SpectralCase, barrier: f64) -> Result<TripleLawCrossCheck> {
    let k_quadrature = triple_law_k(s, barrier)?;
    let k_reduced = triple_law_k_reduced(s, barrier)?;
    let (k_printed, printed_note) = match triple_law_k_printed(s, barrier) {
        Ok(k) => (Some(k), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let printed_agrees = k_printed.is_some_and(|k| (k / k_quadrature - 1.0).abs() < 1e-6);
    Ok(TripleLawCrossCheck { k_quadrature, k_reduced, k_printed, printed_note, printed_agrees })
}
