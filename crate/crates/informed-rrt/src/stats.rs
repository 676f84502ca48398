//! Small statistical helpers shared by tests, analysis and the bench
//! harness: chi-squared goodness of fit, order-statistic median CIs,
//! least squares and a two-sample KS statistic.

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use crate::error::{Error, Result};

/// Pearson chi-squared statistic for observed counts against expected
/// counts. Panics if lengths differ or an expected count is not
/// positive.
pub fn chi_square_stat(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len(), "bin count mismatch");
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            assert!(e > 0.0, "expected count must be positive");
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper-tail chi-squared critical value: the statistic value exceeded
/// with probability `alpha` under `df` degrees of freedom.
pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    assert!(df >= 1, "degrees of freedom must be at least 1");
    assert!((0.0..1.0).contains(&alpha) && alpha > 0.0);
    ChiSquared::new(df as f64)
        .expect("valid degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

/// Sample median (lower of the two central values for even lengths)
/// with a conservative two-sided nonparametric confidence interval from
/// binomial order statistics.
///
/// Infinite values are legal and sort above all finite ones, so the
/// median of a mostly-unsolved batch is `+inf`. For very small samples
/// the interval clamps to the sample range, where the requested level
/// may not be reachable.
pub fn median_ci(values: &[f64], level: f64) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(Error::InsufficientData("median of empty sample".into()));
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(Error::InvalidConfig(format!("CI level {level}")));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("median sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let median = sorted[(n - 1) / 2];
    let alpha = 1.0 - level;
    let binom = Binomial::new(0.5, n as u64).expect("valid binomial");
    let mut lower_rank = 1usize;
    for k in 0..n as u64 {
        if binom.cdf(k) <= alpha / 2.0 {
            lower_rank = k as usize + 1;
        } else {
            break;
        }
    }
    lower_rank = lower_rank.min((n + 1) / 2);
    let upper_rank = n + 1 - lower_rank;
    Ok((median, sorted[lower_rank - 1], sorted[upper_rank - 1]))
}

/// Ordinary least squares line fit; returns `(slope, intercept)`.
/// Requires at least two distinct x values.
pub fn ols_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    assert_eq!(xs.len(), ys.len(), "sample length mismatch");
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return Err(Error::InsufficientData("OLS needs two points".into()));
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("OLS needs distinct x values".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Two-sample Kolmogorov-Smirnov statistic. Both inputs must already be
/// sorted ascending.
pub fn ks_statistic(sorted_a: &[f64], sorted_b: &[f64]) -> f64 {
    assert!(!sorted_a.is_empty() && !sorted_b.is_empty());
    let (na, nb) = (sorted_a.len(), sorted_b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < na || j < nb {
        let v = match (sorted_a.get(i), sorted_b.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < na && sorted_a[i] == v {
            i += 1;
        }
        while j < nb && sorted_b[j] == v {
            j += 1;
        }
        let fa = i as f64 / na as f64;
        let fb = j as f64 / nb as f64;
        d = d.max((fa - fb).abs());
    }
    d
}

/// Standard deviation of a Binomial(n, p) count.
pub fn binomial_sigma(n: u64, p: f64) -> f64 {
    (n as f64 * p * (1.0 - p)).sqrt()
}
