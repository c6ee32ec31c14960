//! Exponential functionals I(ξ) = ∫₀^∞ e^{-αξ_s} ds of the Lévy processes
//! underlying the conditioned and killed stable processes.
//!
//! Two laws are explicit.
//!
//! * ξ↑ built from a spectrally negative process. I is c⁻¹ times a standard
//!   stable subordinator of index 1/α at time 1, E e^{-λI} = e^{-(λ/c)^{1/α}}.
//! * ξ* built from a spectrally negative X, viewed through the spectrally
//!   positive Y = -X. Under P₁, I(-ξ*) is the first time Y exceeds 1, so it
//!   has the law of S^{-α} with S = sup_{s≤1} Y_s.
//!
//! Throughout, c is the constant of the one-sided Laplace exponent, c₋ Γ(2-α)
//! / (α(α-1)) for jump density c₋|x|^{-1-α}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    gamma_pos, lgamma, log_gamma_complex, loglog_slope, recip_gamma, sum_series_with_envelope, Quadrature,
    SeriesValue,
};

const MAX_TERMS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpFunctionalCase {
    /// I(ξ↑) when X has no positive jumps.
    UpSpectrallyNegative,
    /// I(-ξ*) when X has no positive jumps (so -X is spectrally positive).
    StarSpectrallyPositive,
    /// Two-sided jumps: only tail statements are available.
    GenericTails,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFunctionalModel {
    pub case: ExpFunctionalCase,
    pub alpha: f64,
    pub c: f64,
    /// E ξ↑₁ = c Γ(α).
    pub m: f64,
}

impl ExpFunctionalModel {
    /// Model from the Laplace-exponent constant c.
    pub fn new(case: ExpFunctionalCase, alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("exponential functionals need alpha in (1, 2), got {alpha}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("c must be positive, got {c}")));
        }
        Ok(Self { case, alpha, c, m: c * gamma_pos(alpha) })
    }

    /// Model from the jump-density constant of the one-sided process.
    pub fn from_jump_constant(case: ExpFunctionalCase, alpha: f64, jump: f64) -> Result<Self> {
        if !(jump > 0.0 && jump.is_finite()) {
            return Err(Error::Domain(format!("jump constant must be positive, got {jump}")));
        }
        let c = jump * gamma_pos(2.0 - alpha) / (alpha * (alpha - 1.0));
        Self::new(case, alpha, c)
    }

    /// Jump-density constant c₋ recovered from c.
    pub fn jump_constant(&self) -> f64 {
        self.c * self.alpha * (self.alpha - 1.0) / gamma_pos(2.0 - self.alpha)
    }

    fn require(&self, case: ExpFunctionalCase) -> Result<()> {
        if self.case != case {
            return Err(Error::Domain(format!("operation needs the {case:?} model, got {:?}", self.case)));
        }
        Ok(())
    }
}

/// E I(ξ↑)^{-k} = α m^k Γ(kα) / (Γ(α)^k (k-1)!).
pub fn neg_moment_i(model: &ExpFunctionalModel, k: u32) -> Result<f64> {
    model.require(ExpFunctionalCase::UpSpectrallyNegative)?;
    if k < 1 {
        return Err(Error::Domain("negative moments are indexed from k = 1".into()));
    }
    let (a, kf) = (model.alpha, k as f64);
    let ln = a.ln() + kf * model.m.ln() + lgamma(kf * a) - kf * lgamma(a) - lgamma(kf);
    Ok(ln.exp())
}

/// E e^{-λ I(ξ↑)} = exp(-(λ/c)^{1/α}).
pub fn laplace_i(model: &ExpFunctionalModel, lambda: f64) -> Result<f64> {
    model.require(ExpFunctionalCase::UpSpectrallyNegative)?;
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("Laplace argument must be nonnegative, got {lambda}")));
    }
    Ok((-(lambda / model.c).powf(1.0 / model.alpha)).exp())
}

/// Power series of the density of I(ξ↑):
/// -(1/(πx)) Σ_{n≥1} Γ(1+n/α) sin(πn/α) (-(cx)^{-1/α})ⁿ / n!.
pub fn density_i_series(model: &ExpFunctionalModel, x: f64, tol: f64) -> Result<SeriesValue> {
    model.require(ExpFunctionalCase::UpSpectrallyNegative)?;
    check_point(x, tol)?;
    let beta = 1.0 / model.alpha;
    let ly = -beta * (model.c * x).ln();
    let pre = 1.0 / (PI * x);
    let log_mag = |n: f64| lgamma(1.0 + n * beta) + n * ly - lgamma(n + 1.0);
    let term = |k: usize| {
        let n = (k + 1) as f64;
        let sign = if (k + 1) % 2 == 0 { -1.0 } else { 1.0 };
        pre * sign * (PI * n * beta).sin() * log_mag(n).exp()
    };
    let env = |k: usize| pre * log_mag((k + 1) as f64).exp();
    let s = sum_series_with_envelope(term, env, tol, MAX_TERMS);
    finish_series(s, tol)
}

/// Density of I(ξ↑). Uses the power series where it reaches `tol` without
/// serious cancellation and otherwise Kanter's integral representation of the
/// stable subordinator density (then `n_terms` is 0 and `tail_bound` is the
/// quadrature error estimate).
pub fn density_i(model: &ExpFunctionalModel, x: f64, tol: f64) -> Result<SeriesValue> {
    match density_i_series(model, x, tol) {
        Ok(s) => Ok(s),
        Err(Error::Convergence { .. }) => {
            let (v, e) = kanter_density(1.0 / model.alpha, model.c * x, tol / model.c)?;
            Ok(quadrature_value(model.c * v, model.c * e))
        }
        Err(e) => Err(e),
    }
}

/// E^↑_0 X_t^k = (mt)^k Γ(α(k+1)) / (Γ(α)^{k+1} k!).
pub fn entrance_moment(model: &ExpFunctionalModel, k: u32, t: f64) -> Result<f64> {
    model.require(ExpFunctionalCase::UpSpectrallyNegative)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    let (a, kf) = (model.alpha, k as f64);
    let ln = kf * (model.m * t).ln() + lgamma(a * (kf + 1.0)) - (kf + 1.0) * lgamma(a) - lgamma(kf + 1.0);
    Ok(ln.exp())
}

/// Density of X_t under the entrance law at 0 of the conditioned process:
/// p_t(x) = p_I(t/x) / (α m x), which follows from E₀ f(X_t) =
/// E[I⁻¹ f(t/I)] / (α m).
pub fn entrance_density(model: &ExpFunctionalModel, t: f64, x: f64, tol: f64) -> Result<SeriesValue> {
    model.require(ExpFunctionalCase::UpSpectrallyNegative)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    check_point(x, tol)?;
    let scale = 1.0 / (model.alpha * model.m * x);
    let s = density_i(model, t / x, tol / scale)?;
    Ok(SeriesValue {
        value: s.value * scale,
        tail_bound: s.tail_bound * scale,
        rounding_bound: s.rounding_bound * scale,
        ..s
    })
}

/// Power series of the density of S = sup_{s≤1} Y_s for the spectrally
/// positive process with E e^{-λY₁} = e^{λ^α}:
/// Σ_{n≥1} (αn-1) / (Γ(αn) Γ(1+1/α-n)) y^{αn-2}.
pub fn supremum_density_series(alpha: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_point(y, tol)?;
    let ly = y.ln();
    let log_env = |n: f64| {
        // |1/Γ(1+1/α-n)| ≤ Γ(n-1/α)/π.
        (alpha * n - 1.0).ln() - lgamma(alpha * n) + lgamma(n - 1.0 / alpha) - PI.ln() + (alpha * n - 2.0) * ly
    };
    let term = |k: usize| {
        let n = (k + 1) as f64;
        (alpha * n - 1.0) * recip_gamma(1.0 + 1.0 / alpha - n) * (-lgamma(alpha * n) + (alpha * n - 2.0) * ly).exp()
    };
    let env = |k: usize| log_env((k + 1) as f64).exp();
    let s = sum_series_with_envelope(term, env, tol, MAX_TERMS);
    finish_series(s, tol)
}

/// ln E S^s for S as in [`supremum_density_series`], 1-α < Re s < α:
/// E S^s = s π sin(π/α) / (α Γ(1-s) Γ(1+s/α) sin(πs/α) sin(π(1-s)/α)).
fn log_supremum_mellin(alpha: f64, s: Complex64) -> Complex64 {
    let pi = Complex64::new(PI, 0.0);
    s.ln() + (PI * (PI / alpha).sin() / alpha).ln() - ln_gamma_c(1.0 - s) - ln_gamma_c(1.0 + s / alpha)
        - (pi * s / alpha).sin().ln()
        - (pi * (1.0 - s) / alpha).sin().ln()
}

/// ln Γ(z) up to multiples of 2πi, extended to Re z ≤ 0 by recurrence.
fn ln_gamma_c(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        ln_gamma_c(z + 1.0) - z.ln()
    } else {
        log_gamma_complex(z)
    }
}

/// Contour abscissa: to the right of the removable point s = 1 for large y,
/// where the result is governed by the pole at s = α.
fn mellin_abscissa(alpha: f64, y: f64) -> f64 {
    if y > 1.0 {
        0.5 * (1.0 + alpha)
    } else {
        0.5
    }
}

/// (1/π) ∫₀^∞ Re[y^{-σ-it} g(σ+it)] dt for a Mellin-type inverse.
fn mellin_inverse<G: Fn(Complex64) -> Complex64>(g: G, alpha: f64, sigma: f64, y: f64, tol: f64) -> Result<(f64, f64)> {
    // |E S^s| decays like exp(-π(3-α)|t|/(2α)).
    let rate = PI * (3.0 - alpha) / (2.0 * alpha);
    let t_max = 45.0 / rate;
    let ly = y.ln();
    let f = |t: f64| {
        let s = Complex64::new(sigma, t);
        (g(s) - s * ly).exp().re
    };
    // Split on the oscillation scale of y^{-it}.
    let pieces = ((t_max * ly.abs() / PI).ceil() as usize).clamp(4, 400);
    let q = Quadrature::new(tol * PI / pieces as f64, 1e-10).with_max_segments(400);
    let (mut v, mut e) = (0.0, 0.0);
    for i in 0..pieces {
        let (a, b) = (t_max * i as f64 / pieces as f64, t_max * (i + 1) as f64 / pieces as f64);
        let r = q.integrate(f, a, b)?;
        v += r.value;
        e += r.error_estimate;
    }
    Ok((v / PI, e / PI))
}

/// Density of S by Mellin inversion; valid for every y > 0.
pub fn supremum_density_mellin(alpha: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_point(y, tol)?;
    let (v, e) = mellin_inverse(|s| log_supremum_mellin(alpha, s), alpha, mellin_abscissa(alpha, y), y, tol * y)?;
    Ok(quadrature_value(v / y, e / y))
}

/// P(S ≥ y) by Mellin inversion of E S^s / s.
pub fn supremum_tail_mellin(alpha: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_point(y, tol)?;
    let (v, e) = mellin_inverse(|s| log_supremum_mellin(alpha, s) - s.ln(), alpha, mellin_abscissa(alpha, y), y, tol)?;
    Ok(quadrature_value(v, e))
}

/// P(S ≥ y) = 1 - Σ_{n≥1} y^{αn-1} / (Γ(αn) Γ(1+1/α-n)), the integrated series.
pub fn supremum_tail_series(alpha: f64, y: f64, tol: f64) -> Result<SeriesValue> {
    check_point(y, tol)?;
    let ly = y.ln();
    let term = |k: usize| {
        if k == 0 {
            return 1.0;
        }
        let n = k as f64;
        -recip_gamma(1.0 + 1.0 / alpha - n) * (-lgamma(alpha * n) + (alpha * n - 1.0) * ly).exp()
    };
    let env = |k: usize| {
        if k == 0 {
            return 1.0;
        }
        let n = k as f64;
        (lgamma(n - 1.0 / alpha) - PI.ln() - lgamma(alpha * n) + (alpha * n - 1.0) * ly).exp()
    };
    let s = sum_series_with_envelope(term, env, tol, MAX_TERMS);
    finish_series(s, tol)
}

/// Density of I(-ξ*) under P₁, obtained from the supremum density by the
/// change of variables I = c⁻¹ S^{-α}:
/// p*(x) = c (1/α) (cx)^{-1-1/α} f((cx)^{-1/α}).
/// Falls back to Mellin inversion when the series cancels badly (small x).
pub fn density_i_star(model: &ExpFunctionalModel, x: f64, tol: f64) -> Result<SeriesValue> {
    model.require(ExpFunctionalCase::StarSpectrallyPositive)?;
    check_point(x, tol)?;
    let a = model.alpha;
    let cx = model.c * x;
    let y = cx.powf(-1.0 / a);
    let jac = model.c * cx.powf(-1.0 - 1.0 / a) / a;
    let f = match supremum_density_series(a, y, tol / jac) {
        Ok(s) => s,
        Err(Error::Convergence { .. }) => supremum_density_mellin(a, y, tol / jac)?,
        Err(e) => return Err(e),
    };
    Ok(SeriesValue {
        value: f.value * jac,
        tail_bound: f.tail_bound * jac,
        rounding_bound: f.rounding_bound * jac,
        ..f
    })
}

/// P(I(-ξ*) ≤ x) = P(S ≥ (cx)^{-1/α}).
pub fn cdf_i_star(model: &ExpFunctionalModel, x: f64, tol: f64) -> Result<SeriesValue> {
    model.require(ExpFunctionalCase::StarSpectrallyPositive)?;
    check_point(x, tol)?;
    let y = (model.c * x).powf(-1.0 / model.alpha);
    match supremum_tail_series(model.alpha, y, tol) {
        Ok(s) => Ok(s),
        Err(Error::Convergence { .. }) => supremum_tail_mellin(model.alpha, y, tol),
        Err(e) => Err(e),
    }
}

/// The density of I(-ξ*) in the form c^{1/α} Σ (αn-1)/(Γ(αn)Γ(1+1/α-n))
/// x^{α(2-nα)}. Its leading term grows like x^{α(2-α)}, so it is not a
/// probability density; kept to quantify that.
pub fn density_i_star_as_printed(model: &ExpFunctionalModel, x: f64, tol: f64) -> Result<SeriesValue> {
    model.require(ExpFunctionalCase::StarSpectrallyPositive)?;
    check_point(x, tol)?;
    let a = model.alpha;
    let pre = model.c.powf(1.0 / a);
    let lx = x.ln();
    let term = |k: usize| {
        let n = (k + 1) as f64;
        pre * (a * n - 1.0) * recip_gamma(1.0 + 1.0 / a - n) * (-lgamma(a * n) + a * (2.0 - n * a) * lx).exp()
    };
    let env = |k: usize| {
        let n = (k + 1) as f64;
        pre * ((a * n - 1.0).ln() + lgamma(n - 1.0 / a) - PI.ln() - lgamma(a * n) + a * (2.0 - n * a) * lx).exp()
    };
    let s = sum_series_with_envelope(term, env, tol, MAX_TERMS);
    finish_series(s, tol)
}

/// Tail of an exponential functional law whose power decay is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailKind {
    /// Right tail of I(ξ↑), measured on the density.
    UpRight,
    /// Right tail of I(-ξ↓).
    DownRight,
    /// P(I(-ξ*) ≤ x) as x → 0.
    StarLeft,
    /// P(I(ξ↑) ≤ x) as x → 0 with two-sided jumps.
    UpLeft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub which: TailKind,
    pub slope: f64,
    /// Exponent stated for this tail in the literature the checks target.
    pub stated_exponent: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

/// Log-log slope of a tail of the implemented law over a decade grid.
pub fn tail_exponent_check(model: &ExpFunctionalModel, which: TailKind) -> Result<TailFit> {
    let a = model.alpha;
    let (xs, stated): (Vec<f64>, f64) = match which {
        TailKind::UpRight => {
            model.require(ExpFunctionalCase::UpSpectrallyNegative)?;
            (decade_grid(1e3 / model.c, 1e6 / model.c, 16), -a)
        }
        TailKind::StarLeft => {
            model.require(ExpFunctionalCase::StarSpectrallyPositive)?;
            (decade_grid(1e-7 / model.c, 1e-4 / model.c, 16), -1.0)
        }
        TailKind::DownRight | TailKind::UpLeft => {
            return Err(Error::Unsupported(format!(
                "{which:?}: no closed-form law of this functional is available, only the existence of its tail constant"
            )))
        }
    };
    let values = xs
        .iter()
        .map(|&x| {
            let v = match which {
                TailKind::UpRight => density_i(model, x, 1e-300_f64.max(1e-12 * x.powf(-1.0 - 1.0 / a)))?.value,
                _ => cdf_i_star(model, x, 1e-6 * x * model.c)?.value,
            };
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Numeric(format!("tail value at x={x} underflowed to {v}")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TailFit { which, slope: loglog_slope(&xs, &values), stated_exponent: stated, xs, values })
}

fn decade_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Density of the standard stable subordinator of index β at s, with its
/// quadrature error, from Kanter's representation
/// β/(1-β) s^{-1/(1-β)} (1/π) ∫₀^π A(φ) exp(-s^{-β/(1-β)} A(φ)) dφ,
/// A(φ) = (sin(βφ)^β sin((1-β)φ)^{1-β} / sin φ)^{1/(1-β)}.
fn kanter_density(beta: f64, s: f64, tol: f64) -> Result<(f64, f64)> {
    let r = 1.0 / (1.0 - beta);
    let z = s.powf(-beta * r);
    let ln_a = |p: f64| {
        if p <= 0.0 {
            return beta * r * beta.ln() + (1.0 - beta).ln();
        }
        r * (beta * (beta * p).sin().ln() + (1.0 - beta) * ((1.0 - beta) * p).sin().ln() - p.sin().ln())
    };
    let pre = beta * r * s.powf(-r) / PI;
    let f = |p: f64| {
        let la = ln_a(p);
        (la - z * la.exp()).exp()
    };
    let q = Quadrature::new(tol / pre.max(f64::MIN_POSITIVE), 1e-12).with_max_segments(4000);
    let res = q.integrate(f, 0.0, PI)?;
    Ok((pre * res.value, pre * res.error_estimate))
}

fn check_point(x: f64, tol: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("argument must be positive and finite, got {x}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// A series result is usable when its tail and its rounding error are both
/// within `tol`.
fn finish_series(s: SeriesValue, tol: f64) -> Result<SeriesValue> {
    if s.converged && s.rounding_bound <= tol.max(1e-13 * s.value.abs()) {
        Ok(s)
    } else {
        Err(Error::Convergence { best: s.value, error_estimate: s.error_bound() })
    }
}

fn quadrature_value(value: f64, err: f64) -> SeriesValue {
    SeriesValue { value, tail_bound: err, n_terms: 0, converged: true, rounding_bound: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;

    fn up(alpha: f64, c: f64) -> ExpFunctionalModel {
        ExpFunctionalModel::new(ExpFunctionalCase::UpSpectrallyNegative, alpha, c).unwrap()
    }

    fn star(alpha: f64, c: f64) -> ExpFunctionalModel {
        ExpFunctionalModel::new(ExpFunctionalCase::StarSpectrallyPositive, alpha, c).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Fixed Talbot inversion of a Laplace transform, 32 nodes.
    fn talbot<F: Fn(Complex64) -> Complex64>(lt: F, t: f64) -> f64 {
        let m = 32;
        let r = 2.0 * m as f64 / (5.0 * t);
        let mut acc = 0.5 * (lt(Complex64::new(r, 0.0)) * (r * t).exp()).re;
        for k in 1..m {
            let th = k as f64 * PI / m as f64;
            let cot = th.cos() / th.sin();
            let s = Complex64::new(r * th * cot, r * th);
            let sig = th + (th * cot - 1.0) * cot;
            acc += ((s * t).exp() * lt(s) * Complex64::new(1.0, sig)).re;
        }
        r / m as f64 * acc
    }

    fn total(f: impl Fn(f64) -> f64, tol: f64) -> f64 {
        integrate_adaptive(&f, 0.0, 1.0, tol).unwrap().value + integrate_adaptive(&f, 1.0, f64::INFINITY, tol).unwrap().value
    }

    /// ∫₀^∞ f over x = e^u, for heavy right tails.
    fn total_log(f: impl Fn(f64) -> f64, tol: f64) -> f64 {
        let g = |u: f64| f(u.exp()) * u.exp();
        let q = Quadrature::new(tol, 0.0).with_max_segments(4000);
        q.integrate(g, -30.0, 0.0).unwrap().value + q.integrate(g, 0.0, 400.0).unwrap().value
    }

    #[test]
    fn first_negative_moment_is_alpha_m() {
        for (a, c) in [(1.2, 1.0), (1.5, 0.3), (1.8, 4.0)] {
            let md = up(a, c);
            assert!(rel(neg_moment_i(&md, 1).unwrap(), a * md.m) < 1e-14);
        }
        assert!(neg_moment_i(&up(1.5, 1.0), 0).is_err());
    }

    #[test]
    fn negative_moments_match_laplace_transform_integrals() {
        // E I^{-k} = ∫ λ^{k-1} E e^{-λI} dλ / (k-1)!.
        for (a, c) in [(1.2, 1.0), (1.5, 0.7), (1.8, 2.0)] {
            let md = up(a, c);
            for k in 1..=5u32 {
                let f = |l: f64| l.powi(k as i32 - 1) * laplace_i(&md, l).unwrap();
                let q = Quadrature::new(0.0, 1e-12).integrate(f, 0.0, f64::INFINITY).unwrap().value
                    / gamma_pos(k as f64);
                assert!(rel(neg_moment_i(&md, k).unwrap(), q) < 1e-9, "a={a} k={k}");
            }
        }
    }

    #[test]
    fn laplace_transform_endpoints() {
        let md = up(1.5, 2.5);
        assert_eq!(laplace_i(&md, 0.0).unwrap(), 1.0);
        assert!((laplace_i(&md, 2.5).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(laplace_i(&md, -1.0).is_err());
    }

    #[test]
    fn subordinator_density_matches_reference_values() {
        // Series values at high precision, c = 1, α = 1.5.
        let refs = [
            (0.3, 0.816879254082064153571583821262),
            (1.0, 0.350568075920110822739533790532),
            (3.0, 0.0515280221596397290958803917728),
            (10.0, 0.00611223060309605292158006032452),
        ];
        let md = up(1.5, 1.0);
        for (x, want) in refs {
            let s = density_i(&md, x, 1e-14).unwrap();
            assert!(rel(s.value, want) < 1e-11, "x={x}: {} vs {want}", s.value);
            let (k, _) = kanter_density(2.0 / 3.0, x, 1e-15).unwrap();
            assert!(rel(k, want) < 1e-10, "kanter x={x}: {k}");
        }
    }

    #[test]
    fn density_matches_numerical_laplace_inversion() {
        // α = 3/2 makes sin(πn/α) vanish for n divisible by 3.
        for (a, c) in [(1.5, 1.0), (1.5, 2.0), (1.25, 0.5)] {
            let md = up(a, c);
            for x in [0.4 / c, 1.0 / c, 2.5 / c, 7.0 / c] {
                let inv = talbot(|s| (-(s / c).powf(1.0 / a)).exp(), x);
                let d = density_i(&md, x, 1e-13).unwrap().value;
                assert!((d - inv).abs() < 1e-7 * d.max(1e-3), "a={a} c={c} x={x}: {d} vs {inv}");
            }
        }
    }

    #[test]
    fn density_normalizes_and_reproduces_negative_moments() {
        for (a, c) in [(1.5, 1.0), (1.3, 2.0), (1.8, 0.5)] {
            let md = up(a, c);
            let p = |x: f64| density_i(&md, x, 1e-14).unwrap().value;
            assert!((total(p, 1e-11) - 1.0).abs() < 1e-7, "a={a}");
            for k in 1..=2 {
                let m = total(|x| x.powi(-k) * p(x), 1e-11);
                assert!(rel(m, neg_moment_i(&md, k as u32).unwrap()) < 1e-6, "a={a} k={k}");
            }
        }
    }

    #[test]
    fn density_laplace_transform_matches_closed_form() {
        let md = up(1.5, 1.7);
        for l in [0.5 * md.c, md.c, 2.0 * md.c] {
            let lt = total(|x| (-l * x).exp() * density_i(&md, x, 1e-14).unwrap().value, 1e-11);
            assert!((lt - laplace_i(&md, l).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn series_reports_failure_and_auto_route_recovers() {
        let md = up(1.5, 1.0);
        assert!(matches!(density_i_series(&md, 0.01, 1e-12), Err(Error::Convergence { .. })));
        let s = density_i(&md, 0.01, 1e-12).unwrap();
        assert_eq!(s.n_terms, 0);
        assert!(s.value >= 0.0 && s.value < 1e-3);
    }

    #[test]
    fn series_values_settle_as_tolerance_shrinks() {
        let md = up(1.5, 1.0);
        let best = density_i(&md, 0.8, 1e-15).unwrap();
        for k in 3..14 {
            let tol = 10f64.powi(-k);
            let s = density_i(&md, 0.8, tol).unwrap();
            assert!(s.tail_bound <= tol);
            assert!((s.value - best.value).abs() <= tol + s.rounding_bound + best.error_bound());
        }
    }

    #[test]
    fn entrance_moments_follow_from_negative_moments() {
        let md = up(1.5, 1.3);
        for k in 1..=4u32 {
            let via = neg_moment_i(&md, k + 1).unwrap() / (md.alpha * md.m);
            assert!(rel(entrance_moment(&md, k, 1.0).unwrap(), via) < 1e-13);
            assert!(rel(entrance_moment(&md, k, 3.0).unwrap(), 3f64.powi(k as i32) * via) < 1e-13);
        }
    }

    #[test]
    fn entrance_density_moments() {
        for (a, c, t) in [(1.5, 1.0, 1.0), (1.4, 2.0, 0.5), (1.8, 0.7, 2.0)] {
            let md = up(a, c);
            let p = |x: f64| entrance_density(&md, t, x, 1e-14).unwrap().value;
            assert!((total(p, 1e-11) - 1.0).abs() < 1e-7);
            for k in 1..=3 {
                let m = total(|x| x.powi(k) * p(x), 1e-11);
                assert!(rel(m, entrance_moment(&md, k as u32, t).unwrap()) < 1e-6, "a={a} k={k}");
            }
        }
        let md = up(1.5, 1.0);
        let want = md.m * gamma_pos(3.0) / gamma_pos(1.5).powi(2);
        assert!(rel(entrance_moment(&md, 1, 1.0).unwrap(), want) < 1e-14);
    }

    #[test]
    fn entrance_density_self_similar() {
        let md = up(1.6, 0.9);
        for (t, x) in [(2.0, 0.7), (0.3, 1.9)] {
            let lhs = entrance_density(&md, t, x, 1e-14).unwrap().value;
            let rhs = entrance_density(&md, 1.0, x / t, 1e-14).unwrap().value / t;
            assert!(rel(lhs, rhs) < 1e-11);
        }
    }

    #[test]
    fn supremum_density_two_routes() {
        // High-precision series values for α = 1.5.
        let refs = [(0.5, 0.481791220747592), (1.0, 0.244416506522955), (2.0, 0.0823236920183526), (3.0, 0.0342789156021269)];
        for (y, want) in refs {
            let s = supremum_density_series(1.5, y, 1e-13).unwrap().value;
            let m = supremum_density_mellin(1.5, y, 1e-13).unwrap().value;
            assert!(rel(s, want) < 1e-11, "series y={y}: {s}");
            assert!(rel(m, want) < 1e-10, "mellin y={y}: {m}");
        }
        for a in [1.2, 1.8] {
            for y in [0.3, 1.0, 2.0] {
                let s = supremum_density_series(a, y, 1e-13).unwrap().value;
                let m = supremum_density_mellin(a, y, 1e-13).unwrap().value;
                assert!(rel(s, m) < 1e-9, "a={a} y={y}");
                let ts = supremum_tail_series(a, y, 1e-13).unwrap().value;
                let tm = supremum_tail_mellin(a, y, 1e-13).unwrap().value;
                assert!((ts - tm).abs() < 1e-10, "tail a={a} y={y}");
            }
        }
    }

    #[test]
    fn star_density_normalizes_and_matches_cdf() {
        for (a, c) in [(1.5, 1.0), (1.3, 0.4), (1.8, 3.0)] {
            let md = star(a, c);
            let p = |x: f64| density_i_star(&md, x, 1e-13).unwrap().value;
            let mass = total_log(p, 1e-10);
            assert!((mass - 1.0).abs() < 1e-7, "a={a}: {mass}");
            for x in [0.05, 0.5, 2.0] {
                let mass = integrate_adaptive(p, 0.0, x, 1e-11).unwrap().value;
                assert!((mass - cdf_i_star(&md, x, 1e-13).unwrap().value).abs() < 1e-8, "a={a} x={x}");
            }
        }
    }

    #[test]
    fn star_left_tail_is_linear_with_jump_constant() {
        // P(T ≤ t) from 1 behaves like c₋t/α for small t.
        let md = star(1.5, 1.0);
        let x = 1e-8;
        let got = cdf_i_star(&md, x, 1e-16).unwrap().value / x;
        assert!(rel(got, md.jump_constant() / md.alpha) < 1e-3, "{got}");
        let fit = tail_exponent_check(&md, TailKind::StarLeft).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.01, "{}", fit.slope);
    }

    #[test]
    fn printed_star_density_is_not_integrable() {
        let md = star(1.5, 1.0);
        let p = |x: f64| density_i_star_as_printed(&md, x, 1e-12).unwrap().value;
        let m10 = integrate_adaptive(p, 1.0, 10.0, 1e-9).unwrap().value;
        let m100 = integrate_adaptive(p, 1.0, 100.0, 1e-9).unwrap().value;
        assert!(m100 > 5.0 * m10 && m10 > 1.0);
    }

    #[test]
    fn up_right_tail_decays_like_inverse_alpha_power_of_density() {
        // I is a stable subordinator of index 1/α, so its density falls off
        // like x^{-1-1/α}.
        for a in [1.3, 1.5, 1.8] {
            let fit = tail_exponent_check(&up(a, 1.0), TailKind::UpRight).unwrap();
            assert!((fit.slope + 1.0 + 1.0 / a).abs() < 0.01, "a={a}: {}", fit.slope);
        }
    }

    #[test]
    fn unsupported_tails_and_wrong_models() {
        let g = ExpFunctionalModel::new(ExpFunctionalCase::GenericTails, 1.5, 1.0).unwrap();
        assert!(matches!(tail_exponent_check(&g, TailKind::DownRight), Err(Error::Unsupported(_))));
        assert!(matches!(tail_exponent_check(&g, TailKind::UpLeft), Err(Error::Unsupported(_))));
        assert!(neg_moment_i(&star(1.5, 1.0), 1).is_err());
        assert!(density_i_star(&up(1.5, 1.0), 1.0, 1e-10).is_err());
    }

    #[test]
    fn jump_constant_round_trip() {
        let md = ExpFunctionalModel::from_jump_constant(ExpFunctionalCase::UpSpectrallyNegative, 1.5, 0.8).unwrap();
        assert!(rel(md.jump_constant(), 0.8) < 1e-14);
        assert!(rel(md.c, 0.8 * gamma_pos(0.5) / 0.75) < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn laplace_in_unit_interval_and_decreasing(a in 1.05f64..1.95, c in 0.1f64..10.0, l in 0.0f64..50.0) {
                let md = up(a, c);
                let v = laplace_i(&md, l).unwrap();
                prop_assert!(v > 0.0 && v <= 1.0);
                prop_assert!(laplace_i(&md, l + 0.1).unwrap() < v);
            }

            #[test]
            fn densities_nonnegative(a in 1.1f64..1.9, lx in -3.0f64..3.9) {
                let x = lx.exp();
                prop_assert!(density_i(&up(a, 1.0), x, 1e-12).unwrap().value >= -1e-12);
                prop_assert!(density_i_star(&star(a, 1.0), x, 1e-12).unwrap().value >= -1e-12);
            }
        }
    }
}
