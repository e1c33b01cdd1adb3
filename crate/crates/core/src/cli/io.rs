//! Trajectory CSV, return-series ingestion, and run metadata.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::market_model::MicroParams;
use crate::sim::{ReturnSeries, RunSettings, RNG_ID};

use super::CliError;

pub const TRAJECTORY_HEADER: [&str; 9] = [
    "t",
    "x",
    "eps",
    "r",
    "u",
    "sigma",
    "buy",
    "sell",
    "cond_mean",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trajectory<W: Write>(series: &ReturnSeries, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::io(format!("writing trajectory: {e}"));
    w.write_record(TRAJECTORY_HEADER).map_err(io)?;
    for rec in &series.records {
        w.write_record([
            rec.t.to_string(),
            fmt_f64(rec.x),
            fmt_f64(rec.eps),
            fmt_f64(rec.r),
            fmt_f64(rec.u),
            fmt_f64(rec.sigma),
            fmt_f64(rec.buy),
            fmt_f64(rec.sell),
            fmt_f64(rec.cond_mean),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::io(format!("writing trajectory: {e}")))?;
    Ok(())
}

/// Read a return column from CSV. Uses the `r` column when the header has
/// one, otherwise requires a single-column file.
pub fn read_returns<R: Read>(input: R) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::data(format!("malformed CSV header: {e}")))?
        .clone();
    let col = match headers.iter().position(|h| h == "r") {
        Some(i) => i,
        None if headers.len() == 1 => 0,
        None => {
            return Err(CliError::data(format!(
                "CSV has no `r` column and more than one column (header: {})",
                headers.iter().collect::<Vec<_>>().join(",")
            )))
        }
    };
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        // header is line 1
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::data(format!("malformed CSV at row {line}: {e}")))?;
        let cell = rec.get(col).ok_or_else(|| {
            CliError::data(format!(
                "row {line}: missing column {}",
                headers.get(col).unwrap_or("r")
            ))
        })?;
        let v: f64 = cell.parse().map_err(|_| {
            CliError::data(format!("row {line}: cannot parse `{cell}` as a number"))
        })?;
        if !v.is_finite() {
            return Err(CliError::data(format!(
                "row {line}: non-finite value `{cell}`"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata<'a> {
    pub seed: u64,
    pub rng: &'static str,
    pub params: &'a MicroParams,
    pub settings: RunSettings,
    pub negative_volume_steps: usize,
    pub large_return_steps: usize,
    pub trajectory: &'a Path,
}

impl<'a> RunMetadata<'a> {
    pub fn new(series: &'a ReturnSeries, trajectory: &'a Path) -> Self {
        RunMetadata {
            seed: series.seed,
            rng: RNG_ID,
            params: &series.params,
            settings: series.settings,
            negative_volume_steps: series.negative_volume_steps,
            large_return_steps: series.large_return_steps,
            trajectory,
        }
    }
}

pub fn trajectory_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("trajectory_seed{seed}.csv"))
}

pub fn metadata_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("run_seed{seed}.json"))
}

pub fn create_file(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| {
            CliError::io(format!("cannot create directory {}: {e}", parent.display()))
        })?;
    }
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut f = create_file(path)?;
    serde_json::to_writer_pretty(&mut f, value)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    writeln!(f)
        .and_then(|_| f.flush())
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}
