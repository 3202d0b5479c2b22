//! Monte Carlo estimates with normal-approximation confidence intervals.

/// z-value of a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl Estimate {
    /// Estimate of a probability from `hits` successes.
    pub fn from_count(hits: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self { mean: 0.0, std_error: 0.0, trials };
        }
        let p = hits as f64 / trials as f64;
        Self { mean: p, std_error: libm::sqrt(p * (1.0 - p) / trials as f64), trials }
    }

    /// Estimate of a mean from running sums of `x` and `x^2`.
    pub fn from_sums(sum: f64, sum_sq: f64, trials: u64) -> Self {
        if trials == 0 {
            return Self { mean: 0.0, std_error: 0.0, trials };
        }
        let t = trials as f64;
        let mean = sum / t;
        let var = if trials > 1 { ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0) } else { 0.0 };
        Self { mean, std_error: libm::sqrt(var / t), trials }
    }

    pub fn ci95_half_width(&self) -> f64 {
        Z95 * self.std_error
    }

    /// True when `value` lies within `k` standard errors of the mean.
    pub fn within_sigmas(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Ordinary least squares fit of `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_estimate() {
        let e = Estimate::from_count(25, 100);
        assert_eq!(e.mean, 0.25);
        assert!((e.std_error - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!(e.within_sigmas(0.3, 2.0));
    }

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: [f64; 4] = core::array::from_fn(|i| 2.0 - 0.5 * xs[i]);
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }
}
