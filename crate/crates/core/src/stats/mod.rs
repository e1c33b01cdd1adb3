//! Stylized-facts statistics and the risk-monotonicity verifier.

mod autocorr;
mod ks;
pub mod lemma;
mod moments;
mod report;

pub use autocorr::sq_autocorrelation;
pub use ks::{kolmogorov_sf, ks_p_value, ks_statistic, normal_cdf};
pub use lemma::{verify_lemma_risk_monotonicity, LemmaReport, LemmaRow, Utility};
pub use moments::{kurtosis, mean, skewness, variance};
pub use report::{
    evaluate_stylized_facts, stars, StylizedFactsReport, TestedStat, DEFAULT_SIGNIFICANCE,
    MIN_REPORT_LEN, REPORT_LAGS,
};
