//! Trader behaviour: expectation functions, expected utilities of the
//! fundamental and AI traders, and the validated micro parameter set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower clamp applied to the fundamental variable before taking the log.
pub const LOG_CLAMP: f64 = -0.99;

/// Default AR coefficient of the AI traders' trained predictor.
pub const DEFAULT_AR_COEF: f64 = 0.1;

/// `log(1 + max(-0.99, x))`.
pub fn g_log(x: f64) -> f64 {
    (1.0 + x.max(LOG_CLAMP)).ln()
}

/// `0.1 * x`.
pub fn h_ar(x: f64) -> f64 {
    DEFAULT_AR_COEF * x
}

/// Fundamental traders' expected-return function `g`.
///
/// Any monotone function is admissible; the log form is the default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FundamentalFn {
    #[default]
    Log,
    Identity,
}

impl FundamentalFn {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            FundamentalFn::Log => g_log(x),
            FundamentalFn::Identity => x,
        }
    }
}

impl fmt::Display for FundamentalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FundamentalFn::Log => f.write_str("log"),
            FundamentalFn::Identity => f.write_str("identity"),
        }
    }
}

impl FromStr for FundamentalFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "log" => Ok(FundamentalFn::Log),
            "identity" => Ok(FundamentalFn::Identity),
            other => Err(Error::Unknown {
                kind: "g function",
                name: other.to_string(),
            }),
        }
    }
}

impl TryFrom<String> for FundamentalFn {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FundamentalFn> for String {
    fn from(f: FundamentalFn) -> String {
        f.to_string()
    }
}

/// AI traders' trained prediction function `h`.
///
/// The predictor is fixed to its trained form; it reads only the lagged
/// fundamental variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PredictorFn {
    /// `coef * x`. Tag `ar` (coefficient 0.1) or `ar:<coef>`.
    Ar {
        coef: f64,
    },
    Zero,
}

impl Default for PredictorFn {
    fn default() -> Self {
        PredictorFn::Ar {
            coef: DEFAULT_AR_COEF,
        }
    }
}

impl PredictorFn {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            PredictorFn::Ar { coef } if coef == DEFAULT_AR_COEF => h_ar(x),
            PredictorFn::Ar { coef } => coef * x,
            PredictorFn::Zero => 0.0,
        }
    }
}

impl fmt::Display for PredictorFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorFn::Ar { coef } if *coef == DEFAULT_AR_COEF => f.write_str("ar"),
            PredictorFn::Ar { coef } => write!(f, "ar:{coef}"),
            PredictorFn::Zero => f.write_str("zero"),
        }
    }
}

impl FromStr for PredictorFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::Unknown {
            kind: "h function",
            name: s.to_string(),
        };
        match s {
            "ar" => Ok(PredictorFn::default()),
            "zero" => Ok(PredictorFn::Zero),
            _ => {
                let coef = s
                    .strip_prefix("ar:")
                    .ok_or_else(unknown)?
                    .parse::<f64>()
                    .map_err(|_| unknown())?;
                if !coef.is_finite() {
                    return Err(unknown());
                }
                Ok(PredictorFn::Ar { coef })
            }
        }
    }
}

impl TryFrom<String> for PredictorFn {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PredictorFn> for String {
    fn from(f: PredictorFn) -> String {
        f.to_string()
    }
}

/// The full micro-model parameter set.
///
/// Instances built through [`MicroParams::new`] or [`MicroParams::validate`]
/// satisfy positivity of `rho, k, s_liquidity, lambda, gamma`, non-negativity
/// of the trader ratios, and `rho^2 k^2 (p1^2 lambda^2 + p2^2 gamma^2) < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicroParams {
    /// Order-imbalance coefficient.
    pub rho: f64,
    /// Liquidity-taking intensity.
    pub k: f64,
    /// Total constant order scale `S`.
    pub s_liquidity: f64,
    /// Fundamental-to-noise trader ratio.
    pub p1: f64,
    /// AI-to-noise trader ratio.
    pub p2: f64,
    /// Fundamental traders' risk aversion.
    pub lambda: f64,
    /// AI traders' risk aversion.
    pub gamma: f64,
    #[serde(default)]
    pub g_fn: FundamentalFn,
    #[serde(default)]
    pub h_fn: PredictorFn,
}

impl Default for MicroParams {
    /// The reference experiment: rho=4, k=0.4, p1=0.2, p2=0.4, lambda=gamma=1.2.
    fn default() -> Self {
        MicroParams {
            rho: 4.0,
            k: 0.4,
            s_liquidity: 1.0,
            p1: 0.2,
            p2: 0.4,
            lambda: 1.2,
            gamma: 1.2,
            g_fn: FundamentalFn::Log,
            h_fn: PredictorFn::default(),
        }
    }
}

impl MicroParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rho: f64,
        k: f64,
        s_liquidity: f64,
        p1: f64,
        p2: f64,
        lambda: f64,
        gamma: f64,
        g_fn: FundamentalFn,
        h_fn: PredictorFn,
    ) -> Result<Self> {
        let params = MicroParams {
            rho,
            k,
            s_liquidity,
            p1,
            p2,
            lambda,
            gamma,
            g_fn,
            h_fn,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rho", self.rho),
            ("k", self.k),
            ("s_liquidity", self.s_liquidity),
            ("lambda", self.lambda),
            ("gamma", self.gamma),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        for (name, v) in [("p1", self.p1), ("p2", self.p2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        if let PredictorFn::Ar { coef } = self.h_fn {
            if !coef.is_finite() {
                return Err(Error::InvalidParam {
                    name: "h_fn",
                    reason: format!("AR coefficient must be finite, got {coef}"),
                });
            }
        }
        let (alpha, beta) = (self.shock_sensitivity(), self.persistence());
        if !(alpha + beta < 1.0) {
            return Err(Error::NonStationary { alpha, beta });
        }
        Ok(())
    }

    /// `rho^2 k^2`, the noise-only variance floor.
    pub fn noise_variance(&self) -> f64 {
        let rk = self.rho * self.k;
        rk * rk
    }

    /// GARCH `alpha = rho^2 k^2 p2^2 gamma^2`.
    pub fn shock_sensitivity(&self) -> f64 {
        let pg = self.p2 * self.gamma;
        self.noise_variance() * (pg * pg)
    }

    /// GARCH `beta = rho^2 k^2 p1^2 lambda^2`.
    pub fn persistence(&self) -> f64 {
        let pl = self.p1 * self.lambda;
        self.noise_variance() * (pl * pl)
    }

    pub fn g(&self, x: f64) -> f64 {
        self.g_fn.eval(x)
    }

    pub fn h(&self, x: f64) -> f64 {
        self.h_fn.eval(x)
    }
}

/// Dimensionless expected utility of a trader class.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct UtilityValue(pub f64);

impl UtilityValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fundamental traders' mean/standard-deviation utility `g(x) - lambda * sigma`.
pub fn fundamental_utility(
    x_prev: f64,
    sigma_prev: f64,
    params: &MicroParams,
) -> Result<UtilityValue> {
    if !(sigma_prev >= 0.0) || !sigma_prev.is_finite() {
        return Err(Error::NegativeSigma(sigma_prev));
    }
    Ok(UtilityValue(params.g(x_prev) - params.lambda * sigma_prev))
}

/// AI traders' utility `h(x) - gamma * |u|`: the trained prediction
/// penalized by the last prediction error.
pub fn ai_utility(x_prev: f64, u_prev: f64, params: &MicroParams) -> UtilityValue {
    UtilityValue(params.h(x_prev) - params.gamma * u_prev.abs())
}
