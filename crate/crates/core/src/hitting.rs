//! Two-point hitting probabilities before ruin for the symmetric α-stable
//! process, α ∈ (1, 2), and their transfer to ξ↑ and ξ↓.
//!
//! With u the resolvent density of the process killed on leaving (0, ∞) and
//! U the matrix of u over {x, a, b}², the probability of hitting a before b
//! and before leaving (0, ∞) is -(U⁻¹)_{xa} / (U⁻¹)_{xx}. Expanding the
//! cofactors gives the closed ratio
//!
//! ```text
//! f(x,a,b) = (u(x,a)/u(b,a) - u(x,b)/u(b,b)) / (u(a,a)/u(b,a) - u(a,b)/u(b,b)).
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stable::{KilledResolvent, LampertiKind};

/// Condition estimate above which the matrix route refuses to answer.
pub const MAX_CONDITION: f64 = 1e12;

/// Start x and targets a, b of a two-point hitting problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitQuery {
    pub alpha: f64,
    pub x: f64,
    pub a: f64,
    pub b: f64,
}

impl HitQuery {
    pub fn new(alpha: f64, x: f64, a: f64, b: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("points are hit only for alpha in (1, 2), got {alpha}")));
        }
        if !(x > 0.0 && a > 0.0 && b > 0.0 && x.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("need x, a, b > 0, got x={x}, a={a}, b={b}")));
        }
        if (a - b).abs() < 1e-8 * a.max(b) {
            return Err(Error::Domain(format!("targets a={a} and b={b} are too close to separate")));
        }
        if x == a || x == b {
            return Err(Error::Domain(format!("start x={x} coincides with a target")));
        }
        Ok(Self { alpha, x, a, b })
    }
}

/// Probability from the matrix route together with the condition estimate
/// ‖U‖₁‖U⁻¹‖₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixHit {
    pub probability: f64,
    pub condition: f64,
}

fn resolvent_matrix(q: &HitQuery, r: &KilledResolvent) -> Result<[[f64; 3]; 3]> {
    let pts = [q.x, q.a, q.b];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = r.u(pts[i], pts[j])?;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    Ok(m)
}

fn cofactor(m: &[[f64; 3]; 3], i: usize, j: usize) -> f64 {
    let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
    let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
    let minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]];
    if (i + j) % 2 == 0 {
        minor
    } else {
        -minor
    }
}

fn norm1(m: &[[f64; 3]; 3]) -> f64 {
    (0..3).map(|j| (0..3).map(|i| m[i][j].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix route with an explicit resolvent (used to check invariance under
/// the overall constant).
pub fn hit_matrix_method_with(q: &HitQuery, r: &KilledResolvent) -> Result<MatrixHit> {
    let u = resolvent_matrix(q, r)?;
    let mut cof = [[0.0; 3]; 3];
    for (i, row) in cof.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = cofactor(&u, i, j);
        }
    }
    let det: f64 = (0..3).map(|j| u[0][j] * cof[0][j]).sum();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::IllConditioned { condition: f64::INFINITY });
    }
    // U⁻¹ = adj(U) / det, adj = cofactor matrix transposed.
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = cof[j][i] / det;
        }
    }
    let condition = norm1(&u) * norm1(&inv);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    // Index 0 is x, 1 is a.
    Ok(MatrixHit { probability: -inv[0][1] / inv[0][0], condition })
}

/// P_x(X hits a at its first visit to {a, b}, before leaving (0, ∞)), by
/// inverting the resolvent matrix.
pub fn hit_matrix_method(q: &HitQuery) -> Result<f64> {
    Ok(hit_matrix_method_with(q, &KilledResolvent::new(q.alpha)?)?.probability)
}

/// The same probability from the closed ratio f(x, a, b).
pub fn hit_closed_ratio_with(q: &HitQuery, r: &KilledResolvent) -> Result<f64> {
    let (x, a, b) = (q.x, q.a, q.b);
    let (uxa, uba, uxb, ubb, uaa, uab) = (r.u(x, a)?, r.u(b, a)?, r.u(x, b)?, r.u(b, b)?, r.u(a, a)?, r.u(a, b)?);
    let num = uxa / uba - uxb / ubb;
    let den = uaa / uba - uab / ubb;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Numeric(format!("vanishing denominator in the hitting ratio (a={a}, b={b})")));
    }
    Ok(num / den)
}

pub fn hit_closed_ratio(q: &HitQuery) -> Result<f64> {
    hit_closed_ratio_with(q, &KilledResolvent::new(q.alpha)?)
}

/// P(ξ hits v before u) for ξ = ξ↑ or ξ↓ built from the symmetric process
/// started at 1: the stable probability f(1, e^v, e^u) weighted by the
/// h-function ratio h(e^v)/h(1), h(x) = x^{α/2} for ξ↑ and x^{α/2-1} for ξ↓.
pub fn hit_prob_lamperti(kind: LampertiKind, alpha: f64, v: f64, u: f64) -> Result<f64> {
    if !(v < 0.0 && u > 0.0 && v.is_finite() && u.is_finite()) {
        return Err(Error::Domain(format!("need v < 0 < u, got v={v}, u={u}")));
    }
    let exponent = match kind {
        LampertiKind::Up => alpha / 2.0,
        LampertiKind::Down => alpha / 2.0 - 1.0,
        LampertiKind::Star => {
            return Err(Error::Domain("two-point hitting is defined for the up and down processes".into()))
        }
    };
    let q = HitQuery::new(alpha, 1.0, v.exp(), u.exp())?;
    let f = hit_closed_ratio(&q)?;
    let p = (exponent * v).exp() * f;
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::Numeric(format!(
            "hitting probability {p} for the {} process lies outside [0, 1] (v={v}, u={u}, alpha={alpha})",
            kind.name()
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms() -> Vec<(f64, f64, f64)> {
        let p = [0.5, 1.0, 2.0];
        let mut out = vec![];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    if i != j && j != k && i != k {
                        out.push((p[i], p[j], p[k]));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn two_routes_agree_and_are_probabilities() {
        for alpha in [1.2, 1.5, 1.8] {
            for (x, a, b) in perms() {
                let q = HitQuery::new(alpha, x, a, b).unwrap();
                let m = hit_matrix_method(&q).unwrap();
                let c = hit_closed_ratio(&q).unwrap();
                assert!((m - c).abs() < 1e-10, "alpha={alpha} ({x},{a},{b}): {m} vs {c}");
                assert!((0.0..=1.0).contains(&m));
                let swapped = hit_closed_ratio(&HitQuery::new(alpha, x, b, a).unwrap()).unwrap();
                assert!(c + swapped <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn invariant_under_resolvent_constant() {
        let q = HitQuery::new(1.5, 0.7, 1.3, 0.2).unwrap();
        let base = KilledResolvent::new(1.5).unwrap();
        let m0 = hit_matrix_method_with(&q, &base).unwrap().probability;
        let c0 = hit_closed_ratio_with(&q, &base).unwrap();
        for kappa in [1e-6, 0.37, 1.0, 42.0, 1e8] {
            let r = KilledResolvent::with_kappa(1.5, kappa).unwrap();
            assert!((hit_matrix_method_with(&q, &r).unwrap().probability - m0).abs() < 1e-13);
            assert!((hit_closed_ratio_with(&q, &r).unwrap() - c0).abs() < 1e-14);
        }
    }

    #[test]
    fn start_at_target_limit() {
        // 1 - f vanishes like |x - a|^{α-1}, the local behaviour of u near the diagonal.
        for alpha in [1.3, 1.7] {
            let eps = [1e-4, 1e-6, 1e-8, 1e-10];
            let gaps: Vec<f64> = eps
                .iter()
                .map(|e| 1.0 - hit_closed_ratio(&HitQuery::new(alpha, 1.0 + e, 1.0, 2.0).unwrap()).unwrap())
                .collect();
            assert!(gaps.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
            let slope = crate::numerics::loglog_slope(&eps, &gaps);
            assert!((slope - (alpha - 1.0)).abs() < 0.02, "alpha={alpha}: slope {slope}");
        }
    }

    #[test]
    fn rejects_degenerate_queries() {
        assert!(HitQuery::new(1.5, 1.0, 2.0, 2.0 + 1e-9).is_err());
        assert!(HitQuery::new(1.5, 2.0, 2.0, 3.0).is_err());
        assert!(HitQuery::new(2.0, 1.0, 2.0, 3.0).is_err());
        assert!(HitQuery::new(1.5, -1.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn ill_conditioning_is_reported() {
        let q = HitQuery::new(1.95, 1.0 + 2.0 * f64::EPSILON, 1.0, 2.0).unwrap();
        match hit_matrix_method(&q) {
            Err(Error::IllConditioned { condition }) => assert!(condition > MAX_CONDITION),
            other => panic!("expected ill-conditioning, got {other:?}"),
        }
    }

    /// Hitting probability for a simple random walk on a grid of step h over
    /// [0, L], absorbed at 0 and L (far away), with targets a and b: solves
    /// the discrete harmonic problem by the tridiagonal (Thomas) algorithm.
    fn brownian_grid_oracle(x: f64, a: f64, b: f64) -> f64 {
        let h = 1e-3;
        let len = 60.0;
        let n = (len / h) as usize;
        let (ia, ib, ix) = ((a / h).round() as usize, (b / h).round() as usize, (x / h).round() as usize);
        // Unknowns at interior nodes; fixed values: 0 at 0 and L, 1 at a, 0 at b.
        let mut diag = vec![1.0; n + 1];
        let mut lower = vec![0.0; n + 1];
        let mut upper = vec![0.0; n + 1];
        let mut rhs = vec![0.0; n + 1];
        for i in 1..n {
            if i == ia || i == ib {
                continue;
            }
            diag[i] = 2.0;
            lower[i] = -1.0;
            upper[i] = -1.0;
        }
        rhs[ia] = 1.0;
        for i in 1..=n {
            let w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut sol = vec![0.0; n + 1];
        sol[n] = rhs[n] / diag[n];
        for i in (0..n).rev() {
            sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
        }
        sol[ix]
    }

    #[test]
    fn near_brownian_limit_matches_grid_oracle() {
        for (x, a, b) in [(0.5, 1.0, 2.0), (1.5, 1.0, 2.0), (1.0, 0.5, 2.0), (0.7, 2.0, 0.4), (3.0, 1.0, 2.0)] {
            let f = hit_closed_ratio(&HitQuery::new(1.999, x, a, b).unwrap()).unwrap();
            let g = brownian_grid_oracle(x, a, b);
            assert!((f - g).abs() < 1e-2, "({x},{a},{b}): {f} vs {g}");
        }
    }

    #[test]
    fn lamperti_transfer() {
        for alpha in [1.2, 1.5, 1.8] {
            for (v, u) in [(-0.5, 0.5), (-1.0, 2.0), (-0.1, 0.3)] {
                let up = hit_prob_lamperti(LampertiKind::Up, alpha, v, u).unwrap();
                let down = hit_prob_lamperti(LampertiKind::Down, alpha, v, u).unwrap();
                assert!((down / up - (-v).exp()).abs() < 1e-12 * (-v).exp());
            }
            let near: Vec<f64> = [-1e-3, -1e-6, -1e-9]
                .iter()
                .map(|&v| 1.0 - hit_prob_lamperti(LampertiKind::Up, alpha, v, 1.0).unwrap())
                .collect();
            assert!(near.windows(2).all(|w| w[1] < 0.5 * w[0]));
            let mut prev = 1.0;
            for i in 1..=20 {
                let p = hit_prob_lamperti(LampertiKind::Up, alpha, -0.25 * i as f64, 1.0).unwrap();
                assert!(p < prev, "alpha={alpha} v={}", -0.25 * i as f64);
                prev = p;
            }
        }
        assert!(hit_prob_lamperti(LampertiKind::Star, 1.5, -1.0, 1.0).is_err());
    }
}
