//! Reference implementations shared by the integration and acceptance tests.
//! They are written from the definitions, independently of the library.

#![allow(dead_code)]

use num::{BigRational, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

fn exact_mean(xs: &[BigRational]) -> BigRational {
    let sum: BigRational = xs.iter().cloned().sum();
    sum / BigRational::from_integer(xs.len().into())
}

/// Exact central moments `(m2, m3, m4)` in rational arithmetic.
fn exact_central_moments(series: &[f64]) -> (BigRational, BigRational, BigRational) {
    let xs: Vec<BigRational> = series.iter().map(|&v| exact(v)).collect();
    let m = exact_mean(&xs);
    let n = BigRational::from_integer(xs.len().into());
    let (mut s2, mut s3, mut s4) = (
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    );
    for x in &xs {
        let d = x - &m;
        let d2 = &d * &d;
        s3 += &d2 * &d;
        s4 += &d2 * &d2;
        s2 += d2;
    }
    (s2 / &n, s3 / &n, s4 / n)
}

pub fn oracle_mean(series: &[f64]) -> f64 {
    let xs: Vec<BigRational> = series.iter().map(|&v| exact(v)).collect();
    exact_mean(&xs).to_f64().unwrap()
}

pub fn oracle_variance(series: &[f64]) -> f64 {
    exact_central_moments(series).0.to_f64().unwrap()
}

/// `sign(m3) * sqrt(m3^2 / m2^3)`, the ratio taken exactly.
pub fn oracle_skewness(series: &[f64]) -> f64 {
    let (m2, m3, _) = exact_central_moments(series);
    let ratio = (&m3 * &m3) / (&m2 * &m2 * &m2);
    let mag = ratio.to_f64().unwrap().sqrt();
    if m3.is_negative() {
        -mag
    } else {
        mag
    }
}

pub fn oracle_kurtosis(series: &[f64]) -> f64 {
    let (m2, _, m4) = exact_central_moments(series);
    (m4 / (&m2 * &m2)).to_f64().unwrap()
}

/// Lag autocorrelation of the squares, summed exactly.
pub fn oracle_sq_autocorr(series: &[f64], lag: usize) -> f64 {
    let q: Vec<BigRational> = series.iter().map(|&v| exact(v) * exact(v)).collect();
    let qbar = exact_mean(&q);
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    for t in 0..q.len() {
        let d = &q[t] - &qbar;
        if t >= lag {
            num += &d * (&q[t - lag] - &qbar);
        }
        den += &d * &d;
    }
    (num / den).to_f64().unwrap()
}

/// Standard normal CDF from the Taylor series
/// `1/2 + phi(z) * sum z^(2n+1) / (1*3*...*(2n+1))`.
pub fn oracle_normal_cdf(z: f64) -> f64 {
    if z < -9.0 {
        return 0.0;
    }
    if z > 9.0 {
        return 1.0;
    }
    let mut term = z;
    let mut sum = z;
    let z2 = z * z;
    let mut k = 1.0;
    loop {
        k += 2.0;
        term *= z2 / k;
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
    }
    0.5 + sum * (-0.5 * z2).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// KS distance by evaluating the empirical CDF from scratch at, and just
/// below, every sample point: O(n^2).
pub fn oracle_ks(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let mu = oracle_mean(series);
    let sd = oracle_variance(series).sqrt();
    let mut d = 0.0f64;
    for &x in series {
        let at = series.iter().filter(|&&v| v <= x).count() as f64 / n;
        let below = series.iter().filter(|&&v| v < x).count() as f64 / n;
        let f = oracle_normal_cdf((x - mu) / sd);
        d = d.max((at - f).abs()).max((below - f).abs());
    }
    d
}

/// GARCH coefficients straight from the microstructure formulas.
#[allow(clippy::too_many_arguments)]
pub fn oracle_garch(
    rho: f64,
    k: f64,
    p1: f64,
    p2: f64,
    lambda: f64,
    gamma: f64,
    g: f64,
    h: f64,
    sigma_prev: f64,
    u_prev: f64,
) -> (f64, f64, f64, f64) {
    let rk2 = rho * rho * k * k;
    let omega = rk2 * (1.0 + p1 * p1 * g * g + p2 * p2 * h * h);
    let f = rho * (p1 * (g - lambda * sigma_prev) + p2 * (h - gamma * u_prev.abs()));
    let alpha = rk2 * p2 * p2 * gamma * gamma;
    let beta = rk2 * p1 * p1 * lambda * lambda;
    (omega, f, alpha, beta)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Small random series of mixed shapes for oracle comparisons.
pub fn random_small_inputs(count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(8..=60);
        let scale = 10f64.powf(rng.random_range(-2.0..2.0));
        let v: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = rng.random_range(-1.0..1.0);
                // cube gives heavier tails than uniform
                scale
                    * if rng.random_bool(0.5) {
                        u
                    } else {
                        u * u * u * 4.0
                    }
            })
            .collect();
        if v.iter().any(|&x| x != v[0]) {
            out.push(v);
        }
    }
    out
}
