//! The multi-agent market simulation loop, seed batches, and parameter sweeps.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garch::{micro_to_garch, representative_garch};
use crate::market_model::{ai_utility, fundamental_utility, MicroParams};
use crate::pricing::{order_volumes, step_return_closed_form};
use crate::stats::{evaluate_stylized_facts, StylizedFactsReport};

/// Identifier of the random stream, recorded in run metadata.
pub const RNG_ID: &str =
    "chacha20/seed_from_u64+rand_distr-0.5/StandardNormal(ziggurat);draw order per step: x, eps";

pub const DEFAULT_LENGTH: usize = 1000;
pub const DEFAULT_BURN_IN: usize = 100;

/// Lagged state carried from one step to the next.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    pub u_prev: f64,
    pub sigma_prev: f64,
    /// Steps taken so far.
    pub t: u64,
}

impl MarketState {
    /// `u = 0`, `sigma = sqrt(omega(x=0) / (1 - alpha - beta))`.
    pub fn initial(params: &MicroParams) -> Result<Self> {
        let g = representative_garch(params)?;
        Ok(MarketState {
            u_prev: 0.0,
            sigma_prev: g.unconditional_variance().sqrt(),
            t: 0,
        })
    }

    /// Advance one step given the fundamental draw `x` (this is `x_{t-1}`
    /// for the return being formed) and the price shock `eps`.
    pub fn step(&mut self, params: &MicroParams, x: f64, eps: f64) -> Result<StepRecord> {
        let u_fund = fundamental_utility(x, self.sigma_prev, params)?;
        let u_ai = ai_utility(x, self.u_prev, params);
        let garch = micro_to_garch(params, x, self.u_prev, self.sigma_prev)?;

        let r = step_return_closed_form(u_fund, u_ai, eps, params);
        let vols = order_volumes(u_fund, u_ai, eps, params);
        let u = r - garch.f_value;
        let sigma2 = garch.omega
            + garch.alpha * (self.u_prev * self.u_prev)
            + garch.beta * (self.sigma_prev * self.sigma_prev);
        let sigma = sigma2.sqrt();

        self.t += 1;
        self.u_prev = u;
        self.sigma_prev = sigma;
        Ok(StepRecord {
            t: self.t,
            x,
            eps,
            r,
            u,
            sigma,
            buy: vols.buy,
            sell: vols.sell,
            cond_mean: garch.f_value,
        })
    }
}

/// Per-step diagnostics. `x` is also the fundamental shock draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    pub x: f64,
    pub eps: f64,
    pub r: f64,
    pub u: f64,
    pub sigma: f64,
    pub buy: f64,
    pub sell: f64,
    pub cond_mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub length: usize,
    pub burn_in: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            length: DEFAULT_LENGTH,
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub seed: u64,
    pub params: MicroParams,
    pub settings: RunSettings,
    pub returns: Vec<f64>,
    pub records: Vec<StepRecord>,
    /// Kept steps where either volume was negative.
    pub negative_volume_steps: usize,
    /// Kept steps with `|r| > 1`.
    pub large_return_steps: usize,
}

impl ReturnSeries {
    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }
}

/// Simulate with the default burn-in.
pub fn simulate(params: &MicroParams, length: usize, seed: u64) -> Result<ReturnSeries> {
    simulate_with(
        params,
        RunSettings {
            length,
            ..RunSettings::default()
        },
        seed,
    )
}

pub fn simulate_with(
    params: &MicroParams,
    settings: RunSettings,
    seed: u64,
) -> Result<ReturnSeries> {
    params.validate()?;
    if settings.length == 0 {
        return Err(Error::InvalidParam {
            name: "length",
            reason: "must be at least 1".into(),
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut state = MarketState::initial(params)?;
    let mut records = Vec::with_capacity(settings.length);

    for i in 0..settings.burn_in + settings.length {
        let x: f64 = StandardNormal.sample(&mut rng);
        let eps: f64 = StandardNormal.sample(&mut rng);
        let mut rec = state.step(params, x, eps)?;
        if i >= settings.burn_in {
            rec.t = (i - settings.burn_in + 1) as u64;
            records.push(rec);
        }
    }

    let returns: Vec<f64> = records.iter().map(|r| r.r).collect();
    Ok(ReturnSeries {
        seed,
        params: *params,
        settings,
        negative_volume_steps: records
            .iter()
            .filter(|r| r.buy < 0.0 || r.sell < 0.0)
            .count(),
        large_return_steps: returns.iter().filter(|r| r.abs() > 1.0).count(),
        returns,
        records,
    })
}

fn check_seeds(seeds: &[u64]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::Empty("seed list"));
    }
    let mut seen = HashSet::with_capacity(seeds.len());
    for &s in seeds {
        if !seen.insert(s) {
            return Err(Error::DuplicateSeed(s));
        }
    }
    Ok(())
}

/// One independent run per seed, in seed order. Runs execute in parallel.
pub fn simulate_batch(
    params: &MicroParams,
    settings: RunSettings,
    seeds: &[u64],
) -> Result<Vec<ReturnSeries>> {
    check_seeds(seeds)?;
    params.validate()?;
    seeds
        .par_iter()
        .map(|&seed| simulate_with(params, settings, seed))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    P1,
    P2,
    Lambda,
    Gamma,
    Rho,
    K,
}

impl SweepAxis {
    pub fn apply(self, base: &MicroParams, value: f64) -> Result<MicroParams> {
        let mut p = *base;
        match self {
            SweepAxis::P1 => p.p1 = value,
            SweepAxis::P2 => p.p2 = value,
            SweepAxis::Lambda => p.lambda = value,
            SweepAxis::Gamma => p.gamma = value,
            SweepAxis::Rho => p.rho = value,
            SweepAxis::K => p.k = value,
        }
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::P1 => "p1",
            SweepAxis::P2 => "p2",
            SweepAxis::Lambda => "lambda",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Rho => "rho",
            SweepAxis::K => "k",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "p1" => SweepAxis::P1,
            "p2" => SweepAxis::P2,
            "lambda" => SweepAxis::Lambda,
            "gamma" => SweepAxis::Gamma,
            "rho" => SweepAxis::Rho,
            "k" => SweepAxis::K,
            other => {
                return Err(Error::Unknown {
                    kind: "sweep axis",
                    name: other.to_string(),
                })
            }
        })
    }
}

/// Medians across the seeds of a batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: usize,
    pub median_skewness: f64,
    pub median_kurtosis: f64,
    pub median_ks: f64,
    pub median_sq_autocorr1: f64,
    /// Fraction of runs with all four stylized facts present.
    pub all_facts_rate: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summarize(reports: &[StylizedFactsReport]) -> BatchSummary {
    let col =
        |f: fn(&StylizedFactsReport) -> f64| median(&reports.iter().map(f).collect::<Vec<_>>());
    BatchSummary {
        runs: reports.len(),
        median_skewness: col(|r| r.skewness.value),
        median_kurtosis: col(|r| r.kurtosis.value),
        median_ks: col(|r| r.ks.value),
        median_sq_autocorr1: col(|r| r.lag1().value),
        all_facts_rate: reports.iter().filter(|r| r.all_present()).count() as f64
            / reports.len().max(1) as f64,
    }
}

/// Stylized-facts reports for every series of a batch, in order.
pub fn batch_reports(
    batch: &[ReturnSeries],
    significance: f64,
) -> Result<Vec<StylizedFactsReport>> {
    batch
        .par_iter()
        .map(|s| evaluate_stylized_facts(&s.returns, significance))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub summary: BatchSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub axis: SweepAxis,
    pub seeds: Vec<u64>,
    pub settings: RunSettings,
    pub rows: Vec<SweepRow>,
}

/// Vary one parameter, reporting the representative GARCH coefficients and
/// batch stylized-fact medians at each value. Every value is validated
/// before any simulation runs.
pub fn sweep(
    base: &MicroParams,
    axis: SweepAxis,
    values: &[f64],
    settings: RunSettings,
    seeds: &[u64],
    significance: f64,
) -> Result<SweepReport> {
    if values.is_empty() {
        return Err(Error::Empty("sweep value list"));
    }
    check_seeds(seeds)?;
    let params = values
        .iter()
        .map(|&v| axis.apply(base, v))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(values.len());
    for (&value, p) in values.iter().zip(&params) {
        let g = representative_garch(p)?;
        let batch = simulate_batch(p, settings, seeds)?;
        let reports = batch_reports(&batch, significance)?;
        rows.push(SweepRow {
            axis_value: value,
            omega: g.omega,
            alpha: g.alpha,
            beta: g.beta,
            summary: summarize(&reports),
        });
    }
    Ok(SweepReport {
        axis,
        seeds: seeds.to_vec(),
        settings,
        rows,
    })
}
