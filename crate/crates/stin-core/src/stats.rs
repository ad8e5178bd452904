//! Shared statistics helpers: empirical-CDF distances and confidence
//! intervals for the Monte Carlo aggregation.

/// Two-sample Kolmogorov-Smirnov statistic `sup_x |F_a(x) - F_b(x)|`.
///
/// Both inputs must be non-empty; callers validate. Ties are handled by
/// advancing both empirical CDFs before measuring the gap.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    debug_assert!(!a.is_empty() && !b.is_empty());
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);

    let x_step = 1.0 / xs.len() as f64;
    let y_step = 1.0 / ys.len() as f64;
    let (mut i, mut j) = (0usize, 0usize);
    let mut gap: f64 = 0.0;
    let mut max_gap: f64 = 0.0;
    while i < xs.len() || j < ys.len() {
        let take_x = match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) => x <= y,
            (Some(_), None) => true,
            _ => false,
        };
        if take_x {
            let x = xs[i];
            while i < xs.len() && xs[i] == x {
                gap += x_step;
                i += 1;
            }
            while j < ys.len() && ys[j] == x {
                gap -= y_step;
                j += 1;
            }
        } else {
            let y = ys[j];
            while j < ys.len() && ys[j] == y {
                gap -= y_step;
                j += 1;
            }
        }
        max_gap = max_gap.max(gap.abs());
    }
    max_gap
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
pub fn one_sample_ks<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    debug_assert!(!samples.is_empty());
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut max_gap: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        max_gap = max_gap.max((f - i as f64 / n).abs());
        max_gap = max_gap.max(((i + 1) as f64 / n - f).abs());
    }
    max_gap
}

/// Asymptotic critical value for the one-sample KS statistic at level
/// `alpha`: the test rejects when D_n exceeds this. Uses the Kolmogorov
/// tail approximation P(D_n > x) ~ 2 exp(-2 n x^2).
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / (2.0 * n as f64)).sqrt()
}

/// 95% Wilson score interval for a binomial proportion.
///
/// Preferred over the Wald interval near p = 0 or 1: bounds stay inside
/// [0, 1] and always bracket the sample proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0, "wilson_interval requires at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z: f64 = 1.96;
    let z2 = z * z;
    let scale = 1.0 / (1.0 + z2 / n);
    let center = p + z2 / (2.0 * n);
    let margin = z / (2.0 * n) * (4.0 * n * p * (1.0 - p) + z2).sqrt();
    (
        ((center - margin) * scale).clamp(0.0, 1.0),
        ((center + margin) * scale).clamp(0.0, 1.0),
    )
}

/// Sample mean with a 95% normal-approximation interval: (mean, lo, hi).
pub fn mean_confidence_interval(values: &[f64]) -> (f64, f64, f64) {
    assert!(!values.is_empty());
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, mean, mean);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let margin = 1.96 * (var / n).sqrt();
    (mean, mean - margin, mean + margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force KS oracle: evaluate both empirical CDFs at every sample
    /// point of either set and take the largest gap.
    fn ks_brute_force(a: &[f64], b: &[f64]) -> f64 {
        let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        a.iter()
            .chain(b.iter())
            .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn ks_identical_sets_is_zero() {
        let s = [0.3, 1.7, 2.2, 9.0];
        assert_eq!(two_sample_ks(&s, &s), 0.0);
    }

    #[test]
    fn ks_disjoint_supports_is_one() {
        let a = [1.0, 2.0, 3.0];
        let b = [10.0, 11.0];
        assert_eq!(two_sample_ks(&a, &b), 1.0);
    }

    #[test]
    fn ks_simple_case_matches_step_function_oracle() {
        // {1,2,3} vs {1,2,4}: the CDFs differ by 1/3 on [3, 4).
        let a = [1.0, 2.0, 3.0];
        let b = [1.0, 2.0, 4.0];
        let d = two_sample_ks(&a, &b);
        assert!((d - 1.0 / 3.0).abs() < 1e-12);
        assert!((d - ks_brute_force(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn ks_matches_brute_force_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let m = rng.random_range(1..40);
            let a: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * 8.0).round()).collect();
            let b: Vec<f64> = (0..m).map(|_| (rng.random::<f64>() * 8.0).round()).collect();
            let fast = two_sample_ks(&a, &b);
            let brute = ks_brute_force(&a, &b);
            assert!((fast - brute).abs() < 1e-12, "fast {fast} vs brute {brute}");
        }
    }

    #[test]
    fn one_sample_ks_detects_mismatch() {
        let uniform: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d_ok = one_sample_ks(&uniform, |x| x.clamp(0.0, 1.0));
        assert!(d_ok < 0.01, "grid against its own CDF: {d_ok}");
        let d_bad = one_sample_ks(&uniform, |x| x.clamp(0.0, 1.0).powi(2));
        assert!(d_bad > 0.2, "uniform vs quadratic CDF: {d_bad}");
    }

    #[test]
    fn wilson_bounds_bracket_p_hat() {
        for &(s, n) in &[(0u64, 10u64), (10, 10), (5, 10), (1, 1000), (999, 1000)] {
            let (lo, hi) = wilson_interval(s, n);
            let p = s as f64 / n as f64;
            assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0, "s={s} n={n}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn wilson_known_value() {
        // p = 0.5, n = 100 gives roughly (0.40, 0.60).
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo > 0.39 && lo < 0.41, "lo = {lo}");
        assert!(hi > 0.59 && hi < 0.61, "hi = {hi}");
    }

    #[test]
    fn mean_interval_contains_mean() {
        let vals = [0.2, 0.4, 0.6, 0.8];
        let (mean, lo, hi) = mean_confidence_interval(&vals);
        assert!((mean - 0.5).abs() < 1e-12);
        assert!(lo < mean && mean < hi);
    }
}
