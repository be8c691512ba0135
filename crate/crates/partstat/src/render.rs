//! JSON and CSV renderings. Exact integers are decimal strings and exact
//! rationals are `"p/q"` strings, so nothing loses precision in transit.

use std::fmt::Write as _;

use num_rational::BigRational;
use partstat_core::asymptotics::{AsymptoticReport, BlockAsymptoticReport};
use partstat_core::closedforms::FormulaInfo;
use partstat_core::sampler::EmpiricalEstimate;
use partstat_core::zmean::{MeanReport, OracleVerdict};
use serde::Serialize;

/// `p/q` with an explicit denominator, also for integers.
pub fn rat_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Serialize)]
pub struct MeanJson {
    pub n: usize,
    pub k: Option<usize>,
    pub total: String,
    pub mean: String,
    pub mean_float: f64,
    pub asymptotic: Option<f64>,
    pub oracle: Option<&'static str>,
}

impl From<&MeanReport> for MeanJson {
    fn from(r: &MeanReport) -> Self {
        MeanJson {
            n: r.n,
            k: r.k,
            total: r.total.to_string(),
            mean: rat_string(&r.mean),
            mean_float: r.mean_float,
            asymptotic: r.asymptotic,
            oracle: r.oracle.as_ref().map(|v| match v {
                OracleVerdict::Match => "match",
                OracleVerdict::Mismatch { .. } => "mismatch",
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EstimateJson {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

impl From<&EmpiricalEstimate> for EstimateJson {
    fn from(e: &EmpiricalEstimate) -> Self {
        EstimateJson {
            mean: e.mean,
            stderr: e.stderr,
            trials: e.trials,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FormulaJson {
    pub name: &'static str,
    pub domain: &'static str,
    pub variant: &'static str,
    pub canonical: bool,
}

impl From<&FormulaInfo> for FormulaJson {
    fn from(f: &FormulaInfo) -> Self {
        FormulaJson {
            name: f.name,
            domain: f.domain,
            variant: f.variant.as_str(),
            canonical: f.canonical,
        }
    }
}

pub fn catalog_json(entries: &[FormulaInfo]) -> String {
    let rows: Vec<FormulaJson> = entries.iter().map(FormulaJson::from).collect();
    serde_json::to_string_pretty(&rows).expect("catalog serializes")
}

/// Columns: `n,exact,leading,ratio,correction_ratio`.
pub fn convergence_csv(rows: &[AsymptoticReport]) -> String {
    let mut out = String::from("n,exact,leading,ratio,correction_ratio\n");
    for r in rows {
        let exact = partstat_core::exactnum::rat_to_f64(&r.exact);
        writeln!(out, "{},{},{},{},{}", r.n, exact, r.leading, r.ratio, r.correction_ratio).unwrap();
    }
    out
}

/// Columns: `n,k,exact,leading,gap`.
pub fn block_convergence_csv(rows: &[BlockAsymptoticReport]) -> String {
    let mut out = String::from("n,k,exact,leading,gap\n");
    for r in rows {
        let exact = partstat_core::exactnum::rat_to_f64(&r.exact);
        let leading = partstat_core::exactnum::rat_to_f64(&r.leading);
        writeln!(out, "{},{},{},{},{}", r.n, r.k, exact, leading, r.gap).unwrap();
    }
    out
}
