/// Streaming moments of estimates and their errors, updated in run order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ErrorAccumulator {
    count: usize,
    mean: f64,
    m2: f64,
    sum_sq_err: f64,
    sum_fourth_err: f64,
}

impl ErrorAccumulator {
    pub fn push(&mut self, estimate: f64, truth: f64) {
        self.count += 1;
        let d = estimate - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (estimate - self.mean);
        let e2 = (estimate - truth).powi(2);
        self.sum_sq_err += e2;
        self.sum_fourth_err += e2 * e2;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation (divisor `n − 1`).
    pub fn stddev(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.count - 1) as f64).sqrt()
    }

    pub fn rmse(&self) -> f64 {
        (self.sum_sq_err / self.count as f64).sqrt()
    }

    /// Monte Carlo standard error of the RMSE by the delta method.
    pub fn rmse_se(&self) -> f64 {
        let n = self.count as f64;
        let mse = self.sum_sq_err / n;
        let var_sq = (self.sum_fourth_err / n - mse * mse).max(0.0) * n / (n - 1.0);
        (var_sq / n).sqrt() / (2.0 * mse.sqrt())
    }
}

/// Two-pass statistics over a complete sample.
pub fn mean_and_stddev(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn rmse(estimates: &[f64], truth: f64) -> f64 {
    (estimates.iter().map(|x| (x - truth).powi(2)).sum::<f64>() / estimates.len() as f64).sqrt()
}

/// Least-squares line `y ≈ intercept + slope·x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Mean of `xs` with its standard error.
pub fn mean_with_se(xs: &[f64]) -> (f64, f64) {
    let (m, s) = mean_and_stddev(xs);
    (m, s / (xs.len() as f64).sqrt())
}

/// Sample variance with the standard error `√((m₄ − s⁴)/n)`.
pub fn variance_with_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let (m, s) = mean_and_stddev(xs);
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    let var = s * s;
    (var, ((m4 - var * var).max(0.0) / n).sqrt())
}

/// Histogram over `[low, high]` with `bins` equal bins, as (center, density).
pub fn histogram(xs: &[f64], low: f64, high: f64, bins: usize) -> Vec<(f64, f64)> {
    let width = (high - low) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in xs {
        if x >= low && x < high {
            counts[((x - low) / width) as usize] += 1;
        } else if x == high {
            counts[bins - 1] += 1;
        }
    }
    let n = xs.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (low + (i as f64 + 0.5) * width, c as f64 / (n * width)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn line_fit_is_exact_on_a_line() {
        let xs = [0.0, 1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 2.0 * x).collect();
        let (slope, intercept) = least_squares(&xs, &ys);
        assert!((slope + 2.0).abs() < 1e-14 && (intercept - 0.5).abs() < 1e-14);
    }

    #[test]
    fn histogram_integrates_to_one() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 / 999.0) * 2.0 - 1.0).collect();
        let h = histogram(&xs, -1.0, 1.0, 20);
        let total: f64 = h.iter().map(|(_, d)| d * 0.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn streaming_matches_two_pass(xs in prop::collection::vec(-50.0f64..50.0, 2..300), truth in -5.0f64..5.0) {
            let mut acc = ErrorAccumulator::default();
            for &x in &xs {
                acc.push(x, truth);
            }
            let (m, s) = mean_and_stddev(&xs);
            prop_assert!((acc.mean() - m).abs() <= 1e-12 * m.abs().max(1.0));
            prop_assert!((acc.stddev() - s).abs() <= 1e-10 * s.max(1.0));
            let r = rmse(&xs, truth);
            prop_assert!((acc.rmse() - r).abs() <= 1e-12 * r.max(1e-300));
        }
    }
}
