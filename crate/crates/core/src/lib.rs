//! A three-trader (noise, fundamental, AI) market model whose aggregated
//! order flow yields GARCH(1,1) returns.
//!
//! - [`market_model`]: trader expectations and utilities, [`MicroParams`].
//! - [`pricing`]: order volumes and the order-imbalance return.
//! - [`garch`]: the reference GARCH(1,1) generator and the micro-to-GARCH map.
//! - [`sim`]: the simulation loop, seed batches, and parameter sweeps.
//! - [`stats`]: stylized-facts statistics and the risk-monotonicity check.
//! - [`cli`]: configuration, file formats, and subcommands of the binary.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod garch;
pub mod market_model;
pub mod pricing;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use garch::{garch_step, micro_to_garch, stationarity_margin, GarchParams, GarchState};
pub use market_model::{FundamentalFn, MicroParams, PredictorFn, UtilityValue};
pub use pricing::OrderVolumes;
pub use sim::{
    simulate, simulate_batch, simulate_with, MarketState, ReturnSeries, RunSettings, StepRecord,
};
pub use stats::{evaluate_stylized_facts, StylizedFactsReport};
