use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSample {
    pub value: f64,
    pub weight: f64,
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
    pub n: usize,
}

impl Estimate {
    /// Mean and standard error of an i.i.d. sample, accumulated in index
    /// order with compensated sums.
    pub fn mean<I: IntoIterator<Item = f64>>(xs: I) -> Self {
        let xs: Vec<f64> = xs.into_iter().collect();
        let n = xs.len();
        if n == 0 {
            return Self { value: f64::NAN, se: f64::NAN, n };
        }
        let mean = kahan(xs.iter().copied()) / n as f64;
        let ss = kahan(xs.iter().map(|x| (x - mean) * (x - mean)));
        let var = if n > 1 { ss / (n - 1) as f64 } else { 0.0 };
        Self { value: mean, se: (var / n as f64).sqrt(), n }
    }
}

fn kahan<I: Iterator<Item = f64>>(xs: I) -> f64 {
    let (mut sum, mut comp) = (0.0, 0.0);
    for x in xs {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn validate(samples: &[WeightedSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("empty sample".into()));
    }
    if samples.iter().any(|s| !(s.weight >= 0.0) || !s.weight.is_finite() || s.value.is_nan()) {
        return Err(Error::Domain("weights must be finite and nonnegative, values not NaN".into()));
    }
    let total = kahan(samples.iter().map(|s| s.weight));
    if !(total > 0.0) {
        return Err(Error::Domain("weights sum to zero".into()));
    }
    Ok(total)
}

/// sup_x |F_n(x) - F(x)| for the weighted empirical CDF F_n.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[WeightedSample], cdf: F) -> Result<f64> {
    let total = validate(samples)?;
    let mut s: Vec<WeightedSample> = samples.to_vec();
    s.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut acc = 0.0;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i].value;
        let f = cdf(x);
        let before = acc / total;
        // Ties jump together.
        while i < s.len() && s[i].value == x {
            acc += s[i].weight;
            i += 1;
        }
        let after = acc / total;
        d = d.max((before - f).abs()).max((after - f).abs());
    }
    Ok(d)
}

/// Kish effective sample size (Σw)² / Σw².
pub fn effective_size(samples: &[WeightedSample]) -> f64 {
    let w: f64 = samples.iter().map(|s| s.weight).sum();
    let w2: f64 = samples.iter().map(|s| s.weight * s.weight).sum();
    w * w / w2
}

/// Acceptance threshold for a KS distance: `floor`, or the asymptotic 1%
/// critical value 1.63/√n_eff when the sample is too small for it.
pub fn ks_threshold(samples: &[WeightedSample], floor: f64) -> f64 {
    floor.max(1.63 / effective_size(samples).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub estimate: f64,
    pub se: f64,
    pub z: f64,
    pub pass: bool,
}

/// Compare the weighted k-th moment with `target`; passes when the z-score is
/// within `tolerance_sd`.
pub fn moment_check(samples: &[WeightedSample], k: i32, target: f64, tolerance_sd: f64) -> Result<MomentCheck> {
    let total = validate(samples)?;
    let mu = kahan(samples.iter().map(|s| s.weight * s.value.powi(k))) / total;
    let var = kahan(samples.iter().map(|s| (s.weight * (s.value.powi(k) - mu)).powi(2))) / (total * total);
    let se = var.sqrt();
    let z = if se > 0.0 { (mu - target) / se } else if mu == target { 0.0 } else { f64::INFINITY };
    Ok(MomentCheck { estimate: mu, se, z, pass: z.abs() <= tolerance_sd })
}
