//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Intervals are bisected in order of decreasing error estimate. The rule never
//! evaluates the endpoints, so integrable power singularities there are handled
//! by repeated bisection. An infinite upper limit is mapped onto [0, 1) with
//! x = a + t / (1 - t).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_132_099_001,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // On very short segments a node can round onto an endpoint, where the
    // integrand may be singular; such nodes are dropped.
    let f = |x: f64| if x > a && x < b { f(x) } else { 0.0 };
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Adaptive integrator with absolute and relative tolerances.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-12, max_segments: 2000 }
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn with_max_segments(mut self, n: usize) -> Self {
        self.max_segments = n;
        self
    }

    /// Integrate over [a, b]; `b` may be `f64::INFINITY`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadResult> {
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerance must be positive".into()));
        }
        if a.is_nan() || b.is_nan() || a.is_infinite() {
            return Err(Error::Domain(format!("bad integration limits [{a}, {b}]")));
        }
        if b == a {
            return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 1 });
        }
        if b < a {
            let r = self.integrate(f, b, a)?;
            return Ok(QuadResult { value: -r.value, ..r });
        }
        if b.is_infinite() {
            let g = move |t: f64| {
                let s = 1.0 - t;
                let v = f(a + t / s);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            };
            return self.run(&g, 0.0, 1.0);
        }
        self.run(&f, a, b)
    }

    fn run<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<QuadResult> {
        let (v0, e0) = gk21(f, a, b);
        let mut evaluations = 21;
        let mut heap = BinaryHeap::new();
        heap.push(Segment { a, b, value: v0, error: e0 });
        let mut total = v0;
        let mut total_err = e0;
        let mut stalled = false;
        loop {
            let tol = self.abs_tol.max(self.rel_tol * total.abs());
            if total_err <= tol {
                break;
            }
            if heap.len() >= self.max_segments || stalled {
                let value = heap.iter().map(|s| s.value).sum::<f64>();
                return Err(Error::Convergence { best: value, error_estimate: total_err });
            }
            let worst = heap.pop().expect("heap never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                // Interval can no longer be split in f64; keep it and give up.
                heap.push(worst);
                stalled = true;
                continue;
            }
            let (v1, e1) = gk21(f, worst.a, mid);
            let (v2, e2) = gk21(f, mid, worst.b);
            evaluations += 42;
            heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
            heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
            // Recompute sums from scratch occasionally to avoid drift.
            if heap.len() % 64 == 0 {
                total = heap.iter().map(|s| s.value).sum();
                total_err = heap.iter().map(|s| s.error).sum();
            } else {
                total += v1 + v2 - worst.value;
                total_err += e1 + e2 - worst.error;
            }
        }
        let mut segs: Vec<Segment> = heap.into_vec();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value = segs.iter().map(|s| s.value).sum();
        let error_estimate = segs.iter().map(|s| s.error).sum::<f64>().max(0.0);
        Ok(QuadResult { value, error_estimate, evaluations })
    }
}

/// Integrate `f` over [a, b] (b may be +∞) to absolute tolerance `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    Quadrature { abs_tol: tol, rel_tol: 0.0, max_segments: 4000 }.integrate(f, a, b)
}

impl Quadrature {
    /// Integrate over a finite [a, b] an integrand behaving like (x-a)^{pa}
    /// near a and (b-x)^{pb} near b, with pa, pb > -1. Each half is mapped by
    /// a power substitution that makes the integrand bounded at the endpoint.
    /// `f` receives (x, b - x), the second computed without cancellation so a
    /// singular factor at b can be evaluated accurately.
    pub fn integrate_power_ends<F: Fn(f64, f64) -> f64>(&self, f: F, a: f64, b: f64, pa: f64, pb: f64) -> Result<QuadResult> {
        if !(pa > -1.0 && pb > -1.0) {
            return Err(Error::Domain(format!("endpoint exponents must exceed -1, got {pa}, {pb}")));
        }
        if !(b > a) || !b.is_finite() {
            return Err(Error::Domain(format!("need finite a < b, got [{a}, {b}]")));
        }
        let mid = 0.5 * (a + b);
        let half = mid - a;
        // x = a + half s^{ka} with ka = 1/(1+pa) (and mirrored on the right).
        let ka = 1.0 / (1.0 + pa.min(0.0));
        let kb = 1.0 / (1.0 + pb.min(0.0));
        let left = self.integrate(
            |s: f64| {
                if s <= 0.0 {
                    return 0.0;
                }
                let d = half * s.powf(ka);
                f(a + d, (b - a) - d) * half * ka * s.powf(ka - 1.0)
            },
            0.0,
            1.0,
        )?;
        let right = self.integrate(
            |s: f64| {
                if s <= 0.0 {
                    return 0.0;
                }
                let d = half * s.powf(kb);
                f(b - d, d) * half * kb * s.powf(kb - 1.0)
            },
            0.0,
            1.0,
        )?;
        Ok(QuadResult {
            value: left.value + right.value,
            error_estimate: left.error_estimate + right.error_estimate,
            evaluations: left.evaluations + right.evaluations,
        })
    }
}
