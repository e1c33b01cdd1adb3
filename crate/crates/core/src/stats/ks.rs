//! One-sample Kolmogorov-Smirnov distance to a moment-matched normal.

use libm::erfc;

use super::moments::{central_moments, check_sample, mean};
use crate::error::{Error, Result};

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// `sup_x |F_emp(x) - F_N(x)|` where `F_N` is the normal CDF with the
/// sample mean and (`1/T`) variance. Both step edges of the empirical CDF
/// are checked at every order statistic.
pub fn ks_statistic(series: &[f64]) -> Result<f64> {
    check_sample(series, 2)?;
    let mu = mean(series);
    let sd = central_moments(series).0.sqrt();
    if !(sd > 0.0) {
        return Err(Error::Degenerate("zero sample variance"));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal_cdf((x - mu) / sd);
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Survival function of the asymptotic Kolmogorov distribution,
/// `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        // P(K <= l) = sqrt(2 pi)/l sum exp(-(2j-1)^2 pi^2 / (8 l^2))
        let y = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for j in 1..=20 {
            let m = (2 * j - 1) as f64;
            cdf += (m * m * y).exp();
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * cdf
    } else {
        let mut sf = 0.0;
        let mut sign = 1.0;
        for j in 1..=100 {
            let j = j as f64;
            let term = (-2.0 * j * j * lambda * lambda).exp();
            sf += sign * term;
            if term < 1e-300 {
                break;
            }
            sign = -sign;
        }
        2.0 * sf
    };
    p.clamp(0.0, 1.0)
}

/// Asymptotic p-value for a KS distance `d` on `n` observations.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    kolmogorov_sf((n as f64).sqrt() * d)
}
