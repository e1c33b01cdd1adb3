//! Numerical check that expected utility falls as the standard deviation of
//! a location-scale normal return rises, for risk-averse utilities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integration window for the standard-normal shock, `[-L, L]`.
pub const SHOCK_BOUND: f64 = 10.0;
pub const DEFAULT_NODES: usize = 4000;
/// Default shift for the log and power utilities.
pub const DEFAULT_SHIFT: f64 = 12.0;

/// Utility catalog. Tags: `exp[:a]`, `log[:shift]`, `power[:eta[:shift]]`,
/// `linear`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Utility {
    /// `-exp(-a r)`
    Exponential { a: f64 },
    /// `ln(shift + r)`
    Log { shift: f64 },
    /// `((shift + r)^(1-eta) - 1) / (1 - eta)`
    Power { eta: f64, shift: f64 },
    /// `r`; risk-neutral, so it is rejected by the verifier.
    Linear,
}

impl Utility {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Utility::Exponential { a } => -(-a * r).exp(),
            Utility::Log { shift } => (shift + r).ln(),
            Utility::Power { eta, shift } => ((shift + r).powf(1.0 - eta) - 1.0) / (1.0 - eta),
            Utility::Linear => r,
        }
    }

    /// Strictly increasing and strictly concave on its domain.
    pub fn is_risk_averse(&self) -> bool {
        match *self {
            Utility::Exponential { a } => a > 0.0 && a.is_finite(),
            Utility::Log { shift } => shift.is_finite(),
            Utility::Power { eta, shift } => {
                eta > 0.0 && eta != 1.0 && eta.is_finite() && shift.is_finite()
            }
            Utility::Linear => false,
        }
    }

    /// Lower bound of the domain, if any.
    fn domain_floor(&self) -> Option<f64> {
        match *self {
            Utility::Log { shift } | Utility::Power { shift, .. } => Some(-shift),
            _ => None,
        }
    }

    /// `E[U(mu + sigma eps)]` for `eps ~ N(0,1)` when known in closed form.
    pub fn closed_form(&self, mu: f64, sigma: f64) -> Option<f64> {
        match *self {
            Utility::Exponential { a } => Some(-(-a * mu + 0.5 * a * a * sigma * sigma).exp()),
            Utility::Linear => Some(mu),
            _ => None,
        }
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::Exponential { a } => write!(f, "exp:{a}"),
            Utility::Log { shift } => write!(f, "log:{shift}"),
            Utility::Power { eta, shift } => write!(f, "power:{eta}:{shift}"),
            Utility::Linear => f.write_str("linear"),
        }
    }
}

impl FromStr for Utility {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Unknown {
            kind: "utility",
            name: s.to_string(),
        };
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default();
        let nums = parts
            .map(|p| p.parse::<f64>().map_err(|_| unknown()))
            .collect::<Result<Vec<f64>>>()?;
        let arg = |i: usize, default: f64| nums.get(i).copied().unwrap_or(default);
        let u = match (kind, nums.len()) {
            ("exp" | "exponential", 0..=1) => Utility::Exponential { a: arg(0, 1.0) },
            ("log", 0..=1) => Utility::Log {
                shift: arg(0, DEFAULT_SHIFT),
            },
            ("power", 0..=2) => Utility::Power {
                eta: arg(0, 2.0),
                shift: arg(1, DEFAULT_SHIFT),
            },
            ("linear", 0) => Utility::Linear,
            _ => return Err(unknown()),
        };
        Ok(u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub sigma: f64,
    pub expected_utility: f64,
    /// Richardson estimate of the quadrature error.
    pub error_estimate: f64,
    pub closed_form: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub utility: Utility,
    pub mu: f64,
    pub nodes: usize,
    pub rows: Vec<LemmaRow>,
    /// Estimates never rise by more than their combined error estimates.
    pub monotone_decreasing: bool,
}

impl LemmaReport {
    pub fn verdict(&self) -> &'static str {
        if self.monotone_decreasing {
            "monotone decreasing"
        } else {
            "NOT monotone decreasing"
        }
    }
}

/// Composite Simpson rule for `E[U(mu + sigma eps)]` over `eps` in
/// `[-L, L]` with `intervals` (even) panels.
fn simpson_expectation(u: &Utility, mu: f64, sigma: f64, intervals: usize) -> f64 {
    let h = 2.0 * SHOCK_BOUND / intervals as f64;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let f = |e: f64| u.eval(mu + sigma * e) * norm * (-0.5 * e * e).exp();
    let mut acc = f(-SHOCK_BOUND) + f(SHOCK_BOUND);
    for i in 1..intervals {
        let e = -SHOCK_BOUND + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(e);
    }
    acc * h / 3.0
}

/// Estimate expected utility along an increasing sigma grid and report
/// whether it is non-increasing beyond quadrature error.
pub fn verify_lemma_risk_monotonicity(
    utility: Utility,
    mu: f64,
    sigmas: &[f64],
    nodes: usize,
) -> Result<LemmaReport> {
    if !utility.is_risk_averse() {
        return Err(Error::NotRiskAverse(utility.to_string()));
    }
    if sigmas.is_empty() {
        return Err(Error::Empty("sigma grid"));
    }
    if !mu.is_finite() {
        return Err(Error::InvalidParam {
            name: "mu",
            reason: format!("must be finite, got {mu}"),
        });
    }
    if let Some(s) = sigmas.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::InvalidParam {
            name: "sigma",
            reason: format!("grid values must be positive and finite, got {s}"),
        });
    }
    if sigmas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParam {
            name: "sigma",
            reason: "grid must be strictly increasing".into(),
        });
    }
    if nodes < 4 {
        return Err(Error::InvalidParam {
            name: "nodes",
            reason: format!("need at least 4 quadrature panels, got {nodes}"),
        });
    }
    let intervals = nodes.div_ceil(4) * 4;

    let mut rows = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        if let Some(floor) = utility.domain_floor() {
            if !(mu - SHOCK_BOUND * sigma > floor) {
                return Err(Error::Domain {
                    utility: utility.to_string(),
                    mu,
                    sigma,
                    reason: format!(
                        "mu - {SHOCK_BOUND} sigma = {} is outside the domain (> {floor})",
                        mu - SHOCK_BOUND * sigma
                    ),
                });
            }
        }
        let fine = simpson_expectation(&utility, mu, sigma, intervals);
        let coarse = simpson_expectation(&utility, mu, sigma, intervals / 2);
        rows.push(LemmaRow {
            sigma,
            expected_utility: fine,
            error_estimate: (fine - coarse).abs() / 15.0,
            closed_form: utility.closed_form(mu, sigma),
        });
    }
    let monotone_decreasing = rows.windows(2).all(|w| {
        w[1].expected_utility <= w[0].expected_utility + w[0].error_estimate + w[1].error_estimate
    });
    Ok(LemmaReport {
        utility,
        mu,
        nodes: intervals,
        rows,
        monotone_decreasing,
    })
}
