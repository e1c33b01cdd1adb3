//! GARCH(1,1) reference generator and the mapping from micro parameters to
//! GARCH coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_model::{ai_utility, fundamental_utility, MicroParams};
use crate::pricing::net_demand;

/// Coefficients of one GARCH(1,1) step.
///
/// `omega` and `f_value` produced by [`micro_to_garch`] depend on the lagged
/// state, so a value of this type describes a single step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub omega: f64,
    /// Conditional mean of the return at this step.
    pub f_value: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl GarchParams {
    pub fn new(omega: f64, f_value: f64, alpha: f64, beta: f64) -> Result<Self> {
        let p = GarchParams {
            omega,
            f_value,
            alpha,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    /// `omega > 0`, `alpha, beta >= 0`, and strict `alpha + beta < 1`.
    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidParam {
                name: "omega",
                reason: format!("must be positive and finite, got {}", self.omega),
            });
        }
        if !self.f_value.is_finite() {
            return Err(Error::InvalidParam {
                name: "f_value",
                reason: format!("must be finite, got {}", self.f_value),
            });
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        if !(self.alpha + self.beta < 1.0) {
            return Err(Error::NonStationary {
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        Ok(())
    }

    /// `omega / (1 - alpha - beta)`.
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GarchState {
    pub u_prev: f64,
    pub sigma2_prev: f64,
}

/// One GARCH(1,1) step. Returns the return `r` and the next state.
pub fn garch_step(params: &GarchParams, state: GarchState, eps: f64) -> Result<(f64, GarchState)> {
    params.validate()?;
    if !(state.sigma2_prev >= 0.0) {
        return Err(Error::NegativeSigma(state.sigma2_prev));
    }
    let sigma2 =
        params.omega + params.alpha * state.u_prev * state.u_prev + params.beta * state.sigma2_prev;
    let u = sigma2.sqrt() * eps;
    Ok((
        params.f_value + u,
        GarchState {
            u_prev: u,
            sigma2_prev: sigma2,
        },
    ))
}

/// Simulate `len` returns of a constant-coefficient GARCH(1,1), starting at
/// the unconditional variance with `u_0 = 0`.
pub fn garch_path(
    params: &GarchParams,
    len: usize,
    mut eps: impl FnMut() -> f64,
) -> Result<Vec<f64>> {
    params.validate()?;
    let mut state = GarchState {
        u_prev: 0.0,
        sigma2_prev: params.unconditional_variance(),
    };
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let (r, next) = garch_step(params, state, eps())?;
        out.push(r);
        state = next;
    }
    Ok(out)
}

/// GARCH coefficients implied by the micro model at the given lagged state.
///
/// `omega = rho^2 k^2 (1 + p1^2 g(x)^2 + p2^2 h(x)^2)`,
/// `f = rho (p1 (g(x) - lambda sigma) + p2 (h(x) - gamma |u|))`,
/// `alpha = rho^2 k^2 p2^2 gamma^2`, `beta = rho^2 k^2 p1^2 lambda^2`.
pub fn micro_to_garch(
    params: &MicroParams,
    x_prev: f64,
    u_prev: f64,
    sigma_prev: f64,
) -> Result<GarchParams> {
    params.validate()?;
    let u_fund = fundamental_utility(x_prev, sigma_prev, params)?;
    let u_ai = ai_utility(x_prev, u_prev, params);
    let pg = params.p1 * params.g(x_prev);
    let ph = params.p2 * params.h(x_prev);
    GarchParams::new(
        params.noise_variance() * (1.0 + pg * pg + ph * ph),
        params.rho * net_demand(u_fund, u_ai, params),
        params.shock_sensitivity(),
        params.persistence(),
    )
}

/// Coefficients at `x = u = sigma = 0`, comparable to constant-omega GARCH.
pub fn representative_garch(params: &MicroParams) -> Result<GarchParams> {
    micro_to_garch(params, 0.0, 0.0, 0.0)
}

fn require_zero(expected: &'static str, got: f64) -> Result<()> {
    if got != 0.0 {
        return Err(Error::RatioNotZero { expected, got });
    }
    Ok(())
}

/// Noise traders only: `omega = rho^2 k^2`, `f = alpha = beta = 0`.
pub fn reduce_noise_only(params: &MicroParams) -> Result<GarchParams> {
    params.validate()?;
    require_zero("p1", params.p1)?;
    require_zero("p2", params.p2)?;
    GarchParams::new(params.noise_variance(), 0.0, 0.0, 0.0)
}

/// Noise and fundamental traders: `alpha = 0`, `beta = rho^2 k^2 p1^2 lambda^2`.
pub fn reduce_noise_fundamental(
    params: &MicroParams,
    x_prev: f64,
    sigma_prev: f64,
) -> Result<GarchParams> {
    params.validate()?;
    require_zero("p2", params.p2)?;
    let u_fund = fundamental_utility(x_prev, sigma_prev, params)?;
    let pg = params.p1 * params.g(x_prev);
    GarchParams::new(
        params.noise_variance() * (1.0 + pg * pg),
        params.rho * (params.p1 * u_fund.value()),
        0.0,
        params.persistence(),
    )
}

/// Noise and AI traders: `alpha = rho^2 k^2 p2^2 gamma^2`, `beta = 0`.
pub fn reduce_noise_ai(params: &MicroParams, x_prev: f64, u_prev: f64) -> Result<GarchParams> {
    params.validate()?;
    require_zero("p1", params.p1)?;
    let u_ai = ai_utility(x_prev, u_prev, params);
    let ph = params.p2 * params.h(x_prev);
    GarchParams::new(
        params.noise_variance() * (1.0 + ph * ph),
        params.rho * (params.p2 * u_ai.value()),
        params.shock_sensitivity(),
        0.0,
    )
}

/// Which trader classes are present, judged by the zero pattern of `p1, p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketComposition {
    NoiseOnly,
    NoiseFundamental,
    NoiseAi,
    Full,
}

impl MarketComposition {
    pub fn of(params: &MicroParams) -> Self {
        match (params.p1 == 0.0, params.p2 == 0.0) {
            (true, true) => MarketComposition::NoiseOnly,
            (false, true) => MarketComposition::NoiseFundamental,
            (true, false) => MarketComposition::NoiseAi,
            (false, false) => MarketComposition::Full,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MarketComposition::NoiseOnly => "noise-only market",
            MarketComposition::NoiseFundamental => "noise + fundamental market",
            MarketComposition::NoiseAi => "noise + AI market",
            MarketComposition::Full => "noise + fundamental + AI market",
        }
    }
}

/// `1 - (alpha + beta)`; positive iff the implied GARCH is stationary.
/// Defined for any finite input, including parameter sets that fail validation.
pub fn stationarity_margin(params: &MicroParams) -> f64 {
    1.0 - (params.shock_sensitivity() + params.persistence())
}
