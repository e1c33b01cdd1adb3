//! Order volumes and the order-imbalance return.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_model::{MicroParams, UtilityValue};

/// Aggregate buy and sell volume for one step.
///
/// Volumes may be negative for extreme utilities or shocks; they are never
/// clamped since the GARCH mapping relies on the unclamped algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderVolumes {
    pub buy: f64,
    pub sell: f64,
}

impl OrderVolumes {
    pub fn total(&self) -> f64 {
        self.buy + self.sell
    }

    pub fn has_negative(&self) -> bool {
        self.buy < 0.0 || self.sell < 0.0
    }

    pub fn swapped(self) -> Self {
        OrderVolumes {
            buy: self.sell,
            sell: self.buy,
        }
    }
}

/// Liquidity takers' net signal `p1 * U + p2 * M`.
pub fn net_demand(u_fund: UtilityValue, u_ai: UtilityValue, params: &MicroParams) -> f64 {
    params.p1 * u_fund.value() + params.p2 * u_ai.value()
}

/// Buy and sell volumes given both trader utilities and the price shock.
///
/// `buy = S/2 (1 + D) + kS/2 (1 + D) eps`, `sell = S - buy`, with `D` the net
/// demand. The buy side is adjusted by at most one ulp so that
/// `buy + sell == S` holds exactly in floating point. That is always possible
/// when both volumes are non-negative; with a negative volume and an `S`
/// whose low bits are finer than both volumes' ulps no such pair exists and
/// the sum is off by one rounding.
pub fn order_volumes(
    u_fund: UtilityValue,
    u_ai: UtilityValue,
    eps: f64,
    params: &MicroParams,
) -> OrderVolumes {
    let s = params.s_liquidity;
    let demand = net_demand(u_fund, u_ai, params);
    let half = 0.5 * s;
    let buy = half * (1.0 + demand) + half * params.k * (1.0 + demand) * eps;
    let buy = snap_to_budget(buy, s);
    OrderVolumes { buy, sell: s - buy }
}

/// Nudge `buy` by at most an ulp of `max(|buy|, |s - buy|)` so that
/// `buy + (s - buy) == s` in floating point. Tries `buy` itself, `buy` rounded
/// to `q = ulp(max(|buy|, |s - buy|))` (exact whenever `s` is a multiple of
/// `q`, in particular whenever both volumes are non-negative), and
/// `s - (s - buy)`. If none works no nearby pair sums to `s` exactly (both
/// volumes lie on a grid coarser than the low bits of `s`) and `buy` is
/// returned unchanged.
fn snap_to_budget(buy: f64, s: f64) -> f64 {
    let exact = |b: f64| b + (s - b) == s;
    if exact(buy) || !buy.is_finite() || !s.is_finite() {
        return buy;
    }
    let m = buy.abs().max((s - buy).abs());
    let exp = ((m.to_bits() >> 52) & 0x7ff) as i64 - 52;
    if exp >= 1 {
        let q = f64::from_bits((exp as u64) << 52);
        let snapped = (buy / q).round() * q;
        if exact(snapped) {
            return snapped;
        }
    }
    let back = s - (s - buy);
    if exact(back) {
        return back;
    }
    buy
}

/// `rho * (buy - sell) / (buy + sell)`.
pub fn step_return(vols: OrderVolumes, params: &MicroParams) -> Result<f64> {
    let total = vols.total();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::ZeroVolume);
    }
    Ok(params.rho * (vols.buy - vols.sell) / total)
}

/// The return with `S` cancelled out:
/// `rho * D + rho * k * (1 + D) * eps`.
pub fn step_return_closed_form(
    u_fund: UtilityValue,
    u_ai: UtilityValue,
    eps: f64,
    params: &MicroParams,
) -> f64 {
    let demand = net_demand(u_fund, u_ai, params);
    params.rho * demand + params.rho * params.k * (1.0 + demand) * eps
}
