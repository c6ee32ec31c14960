/// Partial sum of a series with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Bound on the omitted tail.
    pub tail_bound: f64,
    /// Number of terms summed (indices `0..n_terms`).
    pub n_terms: usize,
    /// `tail_bound <= tol` was reached within the term budget.
    pub converged: bool,
    /// Floating-point cancellation estimate: ε · Σ|terms|.
    pub rounding_bound: f64,
}

impl SeriesValue {
    /// Larger of the truncation and rounding bounds.
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.rounding_bound
    }
}

/// Sum `term(0) + term(1) + ...` until the first omitted term is no larger
/// than `tol` and no larger than the last included one.
///
/// In the alternating-decreasing regime the first omitted term bounds the
/// tail. A caller whose terms can vanish sporadically (e.g. through a sine
/// factor) should use [`sum_series_with_envelope`] instead.
pub fn sum_series<F: Fn(usize) -> f64>(term: F, tol: f64, max_terms: usize) -> SeriesValue {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    let mut current = term(0);
    let mut n = 0;
    while n < max_terms.max(1) {
        // Kahan-compensated accumulation.
        let y = current - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs_sum += current.abs();
        n += 1;
        let next = term(n);
        if next.abs() <= tol && next.abs() <= current.abs() {
            return SeriesValue {
                value: sum,
                tail_bound: next.abs(),
                n_terms: n,
                converged: true,
                rounding_bound: f64::EPSILON * abs_sum,
            };
        }
        current = next;
    }
    SeriesValue {
        value: sum,
        tail_bound: current.abs(),
        n_terms: n,
        converged: false,
        rounding_bound: f64::EPSILON * abs_sum,
    }
}

/// Sum a series given a magnitude envelope `|term(n)| <= envelope(n)` whose
/// successive ratios are eventually decreasing and below one.
///
/// Once the ratio r = envelope(n+1)/envelope(n) is below one (and, by the
/// envelope assumption, keeps decreasing), the tail from index n on is bounded
/// by envelope(n) / (1 - r).
pub fn sum_series_with_envelope<F, E>(term: F, envelope: E, tol: f64, max_terms: usize) -> SeriesValue
where
    F: Fn(usize) -> f64,
    E: Fn(usize) -> f64,
{
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    let mut n = 0;
    let mut tail = f64::INFINITY;
    while n < max_terms.max(1) {
        let t_n = term(n);
        let y = t_n - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs_sum += t_n.abs();
        n += 1;
        let env = envelope(n);
        let env_after = envelope(n + 1);
        if env == 0.0 {
            tail = 0.0;
        } else {
            let r = env_after / env;
            tail = if r < 1.0 { env / (1.0 - r) } else { f64::INFINITY };
        }
        if tail <= tol {
            return SeriesValue {
                value: sum,
                tail_bound: tail,
                n_terms: n,
                converged: true,
                rounding_bound: f64::EPSILON * abs_sum,
            };
        }
    }
    SeriesValue {
        value: sum,
        tail_bound: tail,
        n_terms: n,
        converged: false,
        rounding_bound: f64::EPSILON * abs_sum,
    }
}
