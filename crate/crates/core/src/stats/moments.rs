//! Standardized sample moments with `1/T` normalization.

use crate::error::{Error, Result};

pub(crate) fn check_sample(series: &[f64], min_len: usize) -> Result<()> {
    if series.len() < min_len {
        return Err(Error::TooShort {
            needed: min_len,
            got: series.len(),
        });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("series contains a non-finite value"));
    }
    if series.iter().all(|&v| v == series[0]) {
        return Err(Error::Degenerate("constant series"));
    }
    Ok(())
}

pub fn mean(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// Central moments `(m2, m3, m4)` about the sample mean.
pub(crate) fn central_moments(series: &[f64]) -> (f64, f64, f64) {
    let n = series.len() as f64;
    let m = mean(series);
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    for &v in series {
        let d = v - m;
        let d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    (s2 / n, s3 / n, s4 / n)
}

/// Population variance `1/T sum (r - mean)^2`.
pub fn variance(series: &[f64]) -> f64 {
    central_moments(series).0
}

fn nonzero_m2(m2: f64) -> Result<f64> {
    if m2 > 0.0 && m2.is_finite() {
        Ok(m2)
    } else {
        Err(Error::Degenerate("zero sample variance"))
    }
}

/// Third standardized central moment `m3 / m2^(3/2)`.
pub fn skewness(series: &[f64]) -> Result<f64> {
    check_sample(series, 3)?;
    let (m2, m3, _) = central_moments(series);
    let m2 = nonzero_m2(m2)?;
    Ok(m3 / (m2 * m2.sqrt()))
}

/// Fourth standardized central moment `m4 / m2^2` (normal reference 3).
pub fn kurtosis(series: &[f64]) -> Result<f64> {
    check_sample(series, 4)?;
    let (m2, _, m4) = central_moments(series);
    let m2 = nonzero_m2(m2)?;
    Ok(m4 / (m2 * m2))
}
