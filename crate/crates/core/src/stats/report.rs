//! The stylized-facts battery with asymptotic significance tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::autocorr::sq_autocorrelation;
use super::ks::{ks_p_value, ks_statistic, normal_cdf};
use super::moments::{check_sample, kurtosis, skewness};
use crate::error::{Error, Result};

pub const MIN_REPORT_LEN: usize = 30;
pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;
/// Squared-return autocorrelation lags included in every report.
pub const REPORT_LAGS: [usize; 5] = [1, 2, 3, 4, 5];

/// A statistic, its test statistic, one-sided p-value, and verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestedStat {
    pub value: f64,
    /// z-score, or `sqrt(T) * D` for the KS row.
    pub test_statistic: f64,
    pub p_value: f64,
    /// The stylized fact is present at the report's significance level.
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StylizedFactsReport {
    pub sample_size: usize,
    pub significance: f64,
    pub skewness: TestedStat,
    /// Non-excess kurtosis.
    pub kurtosis: TestedStat,
    pub ks: TestedStat,
    pub sq_autocorr: BTreeMap<usize, TestedStat>,
    pub tests: Vec<String>,
}

impl StylizedFactsReport {
    pub fn lag1(&self) -> &TestedStat {
        &self.sq_autocorr[&1]
    }

    /// True when all four facts are present.
    pub fn all_present(&self) -> bool {
        self.skewness.present && self.kurtosis.present && self.ks.present && self.lag1().present
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<34} {:>12} {:>12}  {:<5} fact",
            "statistic", "value", "p-value", "stars"
        );
        let rows = [
            ("Skewness (<0)", self.skewness),
            ("Kurtosis (>3)", self.kurtosis),
            ("KS statistic", self.ks),
            ("1st-order sq. autocorrelation (>0)", *self.lag1()),
        ];
        for (name, s) in rows {
            let _ = writeln!(
                out,
                "{:<34} {:>12.4} {:>12.3e}  {:<5} {}",
                name,
                s.value,
                s.p_value,
                stars(s.p_value),
                if s.present { "yes" } else { "no" }
            );
        }
        let _ = writeln!(
            out,
            "T = {}, significance = {}",
            self.sample_size, self.significance
        );
        out
    }
}

/// `***` p<0.01, `**` p<0.05, `*` p<0.1.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

fn tested(value: f64, z: f64, p: f64, significance: f64) -> TestedStat {
    let p = p.clamp(0.0, 1.0);
    TestedStat {
        value,
        test_statistic: z,
        p_value: p,
        present: p < significance,
    }
}

/// Compute skewness, kurtosis, KS distance, and squared-return
/// autocorrelations with one-sided tests in the direction of each stylized
/// fact (negative skew, kurtosis above 3, non-normality, positive
/// clustering).
pub fn evaluate_stylized_facts(series: &[f64], significance: f64) -> Result<StylizedFactsReport> {
    if !(significance > 0.0 && significance < 1.0) {
        return Err(Error::InvalidParam {
            name: "significance",
            reason: format!("must lie in (0, 1), got {significance}"),
        });
    }
    check_sample(series, MIN_REPORT_LEN)?;
    let n = series.len();
    let t = n as f64;

    let skew = skewness(series)?;
    let z_skew = skew / (6.0 / t).sqrt();
    let kurt = kurtosis(series)?;
    let z_kurt = (kurt - 3.0) / (24.0 / t).sqrt();
    let d = ks_statistic(series)?;

    let mut sq_autocorr = BTreeMap::new();
    for lag in REPORT_LAGS {
        let a = sq_autocorrelation(series, lag)?;
        let z = a * t.sqrt();
        sq_autocorr.insert(lag, tested(a, z, normal_cdf(-z), significance));
    }

    Ok(StylizedFactsReport {
        sample_size: n,
        significance,
        skewness: tested(skew, z_skew, normal_cdf(z_skew), significance),
        kurtosis: tested(kurt, z_kurt, normal_cdf(-z_kurt), significance),
        ks: tested(d, t.sqrt() * d, ks_p_value(d, n), significance),
        sq_autocorr,
        tests: vec![
            "skewness: one-sided z-test of skew < 0, SE = sqrt(6/T)".into(),
            "kurtosis: one-sided z-test of kurtosis > 3, SE = sqrt(24/T)".into(),
            "ks: asymptotic Kolmogorov distribution; conservative because mean and variance are estimated".into(),
            "sq_autocorr: one-sided z-test of autocorrelation > 0, SE = 1/sqrt(T)".into(),
        ],
    })
}
