use crate::error::{Error, Result};

/// Lag-`lag` autocorrelation of the squared series, centered at the mean of
/// the squares:
/// `sum_{t>lag} (q_t - q̄)(q_{t-lag} - q̄) / sum_t (q_t - q̄)^2`, `q = r^2`.
pub fn sq_autocorrelation(series: &[f64], lag: usize) -> Result<f64> {
    if lag >= series.len() {
        return Err(Error::LagOutOfRange {
            lag,
            len: series.len(),
        });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("series contains a non-finite value"));
    }
    let sq: Vec<f64> = series.iter().map(|r| r * r).collect();
    if sq.iter().all(|&q| q == sq[0]) {
        return Err(Error::Degenerate("constant squared series"));
    }
    let qbar = sq.iter().sum::<f64>() / sq.len() as f64;
    let dev: Vec<f64> = sq.iter().map(|q| q - qbar).collect();
    let den: f64 = dev.iter().map(|d| d * d).sum();
    if !(den > 0.0) {
        return Err(Error::Degenerate("zero variance of squared series"));
    }
    let num: f64 = dev[lag..].iter().zip(&dev).map(|(a, b)| a * b).sum();
    Ok(num / den)
}
