use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::garch::{
    reduce_noise_ai, reduce_noise_fundamental, reduce_noise_only, representative_garch,
    stationarity_margin, GarchParams, MarketComposition,
};
use crate::market_model::MicroParams;
use crate::sim::{
    batch_reports, simulate_batch, sweep, RunSettings, SweepAxis, SweepReport, RNG_ID,
};
use crate::stats::{
    evaluate_stylized_facts, verify_lemma_risk_monotonicity, LemmaReport, StylizedFactsReport,
    Utility,
};

use super::config::{ExperimentConfig, Overrides};
use super::io::{self, fmt_f64};
use super::{CliError, Command};

pub fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Simulate { overrides } => cmd_simulate(&overrides, out),
        Command::Stats {
            input,
            report,
            overrides,
        } => cmd_stats(input.as_deref(), report.as_deref(), &overrides, out).map(|_| ()),
        Command::GarchMap { report, overrides } => {
            cmd_garch_map(report.as_deref(), &overrides, out).map(|_| ())
        }
        Command::Sweep {
            axis,
            values,
            out: path,
            overrides,
        } => cmd_sweep(axis, &values, path.as_deref(), &overrides, out).map(|_| ()),
        Command::VerifyLemma {
            utility,
            mu,
            sigmas,
            nodes,
            report,
        } => cmd_verify_lemma(utility, mu, &sigmas, nodes, report.as_deref(), out).map(|_| ()),
    }
}

fn say(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(text)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::io(format!("writing to stdout: {e}")))
}

/// Writes `trajectory_seed<N>.csv` and `run_seed<N>.json` per configured seed.
pub fn cmd_simulate(overrides: &Overrides, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = ExperimentConfig::load(overrides)?;
    let batch = simulate_batch(&cfg.params, cfg.settings(), &cfg.seeds)?;
    for series in &batch {
        let csv_path = io::trajectory_path(&cfg.out_dir, series.seed);
        let mut f = io::create_file(&csv_path)?;
        io::write_trajectory(series, &mut f)?;
        f.flush()
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", csv_path.display())))?;
        let meta_path = io::metadata_path(&cfg.out_dir, series.seed);
        io::write_json(&meta_path, &io::RunMetadata::new(series, &csv_path))?;
        say(
            out,
            format_args!(
                "seed {}: {} steps -> {} (negative-volume steps: {}, |r|>1 steps: {})",
                series.seed,
                series.len(),
                csv_path.display(),
                series.negative_volume_steps,
                series.large_return_steps
            ),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRun {
    pub seed: Option<u64>,
    pub report: StylizedFactsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsOutput {
    pub source: String,
    pub rng: Option<&'static str>,
    pub params: Option<MicroParams>,
    pub settings: Option<RunSettings>,
    pub runs: Vec<StatsRun>,
}

pub fn cmd_stats(
    input: Option<&Path>,
    report: Option<&Path>,
    overrides: &Overrides,
    out: &mut dyn Write,
) -> Result<StatsOutput, CliError> {
    let cfg = ExperimentConfig::load(overrides)?;
    let output = match input {
        Some(path) => {
            let f = std::fs::File::open(path)
                .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
            let returns = io::read_returns(std::io::BufReader::new(f))?;
            let report = evaluate_stylized_facts(&returns, cfg.significance)?;
            StatsOutput {
                source: path.display().to_string(),
                rng: None,
                params: None,
                settings: None,
                runs: vec![StatsRun { seed: None, report }],
            }
        }
        None => {
            let batch = simulate_batch(&cfg.params, cfg.settings(), &cfg.seeds)?;
            let reports = batch_reports(&batch, cfg.significance)?;
            StatsOutput {
                source: "simulation".into(),
                rng: Some(RNG_ID),
                params: Some(cfg.params),
                settings: Some(cfg.settings()),
                runs: batch
                    .iter()
                    .zip(reports)
                    .map(|(s, report)| StatsRun {
                        seed: Some(s.seed),
                        report,
                    })
                    .collect(),
            }
        }
    };

    for run in &output.runs {
        match run.seed {
            Some(seed) => say(out, format_args!("seed {seed}"))?,
            None => say(out, format_args!("{}", output.source))?,
        }
        say(out, format_args!("{}", run.report.render_table()))?;
    }
    if output.runs.len() > 1 {
        let all = output
            .runs
            .iter()
            .filter(|r| r.report.all_present())
            .count();
        say(
            out,
            format_args!(
                "all four stylized facts present in {all}/{} runs",
                output.runs.len()
            ),
        )?;
    }
    let path = report
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.out_dir.join("stats_report.json"));
    io::write_json(&path, &output)?;
    Ok(output)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GarchMapReport {
    pub params: MicroParams,
    pub omega: f64,
    pub f: f64,
    pub alpha: f64,
    pub beta: f64,
    pub stationarity_margin: f64,
    pub composition: MarketComposition,
    pub market: &'static str,
    /// Coefficients from the matching two- or one-class reduction, if any.
    pub reduction: Option<GarchParams>,
}

pub fn garch_map_report(params: &MicroParams) -> Result<GarchMapReport, CliError> {
    let g = representative_garch(params)?;
    let composition = MarketComposition::of(params);
    let reduction = match composition {
        MarketComposition::NoiseOnly => Some(reduce_noise_only(params)?),
        MarketComposition::NoiseFundamental => Some(reduce_noise_fundamental(params, 0.0, 0.0)?),
        MarketComposition::NoiseAi => Some(reduce_noise_ai(params, 0.0, 0.0)?),
        MarketComposition::Full => None,
    };
    Ok(GarchMapReport {
        params: *params,
        omega: g.omega,
        f: g.f_value,
        alpha: g.alpha,
        beta: g.beta,
        stationarity_margin: stationarity_margin(params),
        composition,
        market: composition.label(),
        reduction,
    })
}

pub fn cmd_garch_map(
    report: Option<&Path>,
    overrides: &Overrides,
    out: &mut dyn Write,
) -> Result<GarchMapReport, CliError> {
    let cfg = ExperimentConfig::load(overrides)?;
    let rep = garch_map_report(&cfg.params)?;
    say(out, format_args!("market: {}", rep.market))?;
    say(
        out,
        format_args!("representative coefficients at x = u = sigma = 0"),
    )?;
    say(out, format_args!("  omega = {}", rep.omega))?;
    say(out, format_args!("  f     = {}", rep.f))?;
    say(out, format_args!("  alpha = {}", rep.alpha))?;
    say(out, format_args!("  beta  = {}", rep.beta))?;
    say(
        out,
        format_args!(
            "stationarity margin 1 - (alpha + beta) = {}",
            rep.stationarity_margin
        ),
    )?;
    if let Some(red) = &rep.reduction {
        say(
            out,
            format_args!(
                "reduction: omega = {}, f = {}, alpha = {}, beta = {}",
                red.omega, red.f_value, red.alpha, red.beta
            ),
        )?;
    }
    if let Some(path) = report {
        io::write_json(path, &rep)?;
    }
    Ok(rep)
}

pub const SWEEP_HEADER: [&str; 9] = [
    "axis_value",
    "omega",
    "alpha",
    "beta",
    "median_skewness",
    "median_kurtosis",
    "median_ks",
    "median_sq_autocorr1",
    "all_facts_rate",
];

pub fn write_sweep_csv<W: Write>(rep: &SweepReport, w: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(w);
    let err = |e: csv::Error| CliError::io(format!("writing sweep CSV: {e}"));
    w.write_record(SWEEP_HEADER).map_err(err)?;
    for row in &rep.rows {
        let s = &row.summary;
        w.write_record(
            [
                row.axis_value,
                row.omega,
                row.alpha,
                row.beta,
                s.median_skewness,
                s.median_kurtosis,
                s.median_ks,
                s.median_sq_autocorr1,
                s.all_facts_rate,
            ]
            .map(fmt_f64),
        )
        .map_err(err)?;
    }
    w.flush()
        .map_err(|e| CliError::io(format!("writing sweep CSV: {e}")))
}

#[derive(Serialize)]
struct SweepMetadata<'a> {
    rng: &'static str,
    base: &'a MicroParams,
    significance: f64,
    report: &'a SweepReport,
}

pub fn cmd_sweep(
    axis: SweepAxis,
    values: &[f64],
    path: Option<&Path>,
    overrides: &Overrides,
    out: &mut dyn Write,
) -> Result<SweepReport, CliError> {
    if values.is_empty() {
        return Err(CliError::config("sweep needs at least one value"));
    }
    let cfg = ExperimentConfig::load(overrides)?;
    let rep = sweep(
        &cfg.params,
        axis,
        values,
        cfg.settings(),
        &cfg.seeds,
        cfg.significance,
    )?;
    let path: PathBuf = path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.out_dir.join(format!("sweep_{axis}.csv")));
    let mut f = io::create_file(&path)?;
    write_sweep_csv(&rep, &mut f)?;
    io::write_json(
        &path.with_extension("json"),
        &SweepMetadata {
            rng: RNG_ID,
            base: &cfg.params,
            significance: cfg.significance,
            report: &rep,
        },
    )?;
    say(
        out,
        format_args!(
            "{:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8} {:>6}",
            axis.to_string(),
            "omega",
            "alpha",
            "beta",
            "skew",
            "kurt",
            "ks",
            "acf1",
            "facts"
        ),
    )?;
    for row in &rep.rows {
        let s = &row.summary;
        say(
            out,
            format_args!(
                "{:>10.4} {:>10.6} {:>10.6} {:>10.6} {:>10.4} {:>10.4} {:>8.4} {:>8.4} {:>6.2}",
                row.axis_value,
                row.omega,
                row.alpha,
                row.beta,
                s.median_skewness,
                s.median_kurtosis,
                s.median_ks,
                s.median_sq_autocorr1,
                s.all_facts_rate
            ),
        )?;
    }
    say(out, format_args!("wrote {}", path.display()))?;
    Ok(rep)
}

pub fn cmd_verify_lemma(
    utility: Utility,
    mu: f64,
    sigmas: &[f64],
    nodes: usize,
    report: Option<&Path>,
    out: &mut dyn Write,
) -> Result<LemmaReport, CliError> {
    let rep = verify_lemma_risk_monotonicity(utility, mu, sigmas, nodes)?;
    say(
        out,
        format_args!("utility {} at mu = {}", rep.utility, rep.mu),
    )?;
    say(
        out,
        format_args!(
            "{:>10} {:>22} {:>12} {:>22}",
            "sigma", "E[U]", "quad. error", "closed form"
        ),
    )?;
    for row in &rep.rows {
        let closed = row
            .closed_form
            .map(|c| format!("{c:.15}"))
            .unwrap_or_else(|| "-".into());
        say(
            out,
            format_args!(
                "{:>10.4} {:>22.15} {:>12.2e} {:>22}",
                row.sigma, row.expected_utility, row.error_estimate, closed
            ),
        )?;
    }
    say(out, format_args!("verdict: {}", rep.verdict()))?;
    if let Some(path) = report {
        io::write_json(path, &rep)?;
    }
    Ok(rep)
}
