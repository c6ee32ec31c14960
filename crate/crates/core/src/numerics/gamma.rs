//! Real and complex gamma functions.
//!
//! `log_gamma` shifts the argument above [`STIRLING_MIN`] with the recurrence
//! and then uses the Stirling series; `gamma_signed` adds the reflection
//! formula so that negative non-integer arguments keep their sign.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const STIRLING_MIN: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// Bernoulli-number coefficients B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma needs a positive finite argument, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    // ln Γ(x) = ln Γ(x + n) - ln(x (x+1) ... (x+n-1)); the product is kept as
    // a mantissa/exponent pair so tiny x does not underflow.
    let mut z = x;
    let mut prod = 1.0_f64;
    let mut log_acc = 0.0;
    while z < STIRLING_MIN {
        prod *= z;
        if !(1e-100..=1e100).contains(&prod.abs()) {
            log_acc += prod.ln();
            prod = 1.0;
        }
        z += 1.0;
    }
    stirling(z) - (log_acc + prod.ln())
}

/// sin(πx) with exact zeros at the integers and argument reduction done
/// before multiplying by π.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// Γ(x) with its sign, for any real x that is not a non-positive integer.
pub fn gamma_signed(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma needs a finite argument, got {x}")));
    }
    if x <= 0.0 && (x - x.round()).abs() < 1e-12 {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        return Ok(log_gamma_unchecked(x).exp());
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    Ok(PI / (s * log_gamma_unchecked(1.0 - x).exp()))
}

/// 1/Γ(x), which is entire: returns exactly 0 at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x >= 0.5 {
        return (-log_gamma_unchecked(x)).exp();
    }
    sin_pi(x) * log_gamma_unchecked(1.0 - x).exp() / PI
}

/// Principal-branch-free ln Γ(z) for Re z > 0, up to multiples of 2πi in the
/// imaginary part. Only intended for use under `exp`.
pub(crate) fn log_gamma_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < STIRLING_MIN {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        corr += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + corr - shift
}
