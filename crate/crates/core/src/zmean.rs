//! The mean engine for Z-statistics.
//!
//! A Z-statistic of depth `r` is determined on every `Π_n^k` by its totals
//! `v_m` over `Π_m^r`: choosing which `m` elements carry the `r` distinguished
//! blocks and partitioning the rest into `k - r` blocks gives
//!
//! ```text
//! Σ_{π ∈ Π_n^k} stat(π) = Σ_m C(n, m) S(n - m, k - r) v_m.
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{binomial, binomial_signed, pow2, rat_to_f64, CountTables};
use crate::partitions::{enumerate_all, enumerate_k};
use crate::statistics::StatisticId;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("v-sequence covers indices up to {have}, need {need}")]
    InsufficientSequence { need: usize, have: usize },
    #[error("count tables cover n up to {have}, need {need}")]
    TablesTooSmall { need: usize, have: usize },
    #[error("no partition of [{n}] has {k} blocks")]
    DivisionByZeroCount { n: usize, k: usize },
    #[error("no closed-form v-sequence for {0}")]
    NoClosedForm(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VSource {
    Enumerated,
    ClosedForm(String),
}

/// Totals `values[m] = Σ_{π ∈ Π_m^depth} stat(π)` for `m = 0..values.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VSequence {
    pub depth: usize,
    pub values: Vec<BigInt>,
    pub source: VSource,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleVerdict {
    Match,
    Mismatch { expected: BigRational, details: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanReport {
    pub n: usize,
    pub k: Option<usize>,
    pub total: BigInt,
    pub mean: BigRational,
    pub mean_float: f64,
    pub asymptotic: Option<f64>,
    pub oracle: Option<OracleVerdict>,
}

impl MeanReport {
    pub fn new(n: usize, k: Option<usize>, total: BigInt, count: &BigInt) -> Self {
        let mean = BigRational::new(total.clone(), count.clone());
        MeanReport {
            n,
            k,
            mean_float: rat_to_f64(&mean),
            total,
            mean,
            asymptotic: None,
            oracle: None,
        }
    }

    /// Attach the verdict of comparing `mean` against an independent value.
    pub fn with_oracle(mut self, expected: &BigRational) -> Self {
        self.oracle = Some(if &self.mean == expected {
            OracleVerdict::Match
        } else {
            OracleVerdict::Mismatch {
                expected: expected.clone(),
                details: alloc::format!("computed {} but oracle gives {}", self.mean, expected),
            }
        });
        self
    }
}

impl VSequence {
    /// Totals over `Π_m^depth`, `m <= max_m`, by enumeration.
    pub fn enumerated(stat: &StatisticId, depth: usize, max_m: usize) -> Self {
        let values = (0..=max_m)
            .map(|m| enumerate_k(m, depth).map(|p| stat.evaluate(&p)).sum::<u64>().into())
            .collect();
        VSequence {
            depth,
            values,
            source: VSource::Enumerated,
        }
    }

    /// Closed-form totals for `m <= max_m`, at the statistic's own depth.
    pub fn closed(stat: &StatisticId, max_m: usize) -> Result<Self, EngineError> {
        let values = (0..=max_m).map(|m| v_closed(stat, m)).collect::<Result<_, _>>()?;
        Ok(VSequence {
            depth: stat.depth(),
            values,
            source: VSource::ClosedForm(alloc::format!("{stat}")),
        })
    }

    /// Largest `m` covered.
    pub fn max_m(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

pub fn v2_enumerated(stat: &StatisticId, max_m: usize) -> VSequence {
    VSequence::enumerated(stat, 2, max_m)
}

pub fn vr_enumerated(stat: &StatisticId, r: usize, max_m: usize) -> VSequence {
    VSequence::enumerated(stat, r, max_m)
}

/// Closed-form `v_n` for the depth-2 statistics.
pub fn v2_closed(stat: &StatisticId, n: usize) -> Result<BigInt, EngineError> {
    if stat.depth() != 2 {
        return Err(EngineError::NoClosedForm(alloc::format!("{stat}")));
    }
    v_closed(stat, n)
}

/// `2^e` for `e >= 0`, else zero; the closed forms are only used where the
/// exponent is nonnegative.
fn p2(e: i64) -> BigInt {
    if e < 0 {
        BigInt::zero()
    } else {
        pow2(e as u64)
    }
}

fn v_closed(stat: &StatisticId, n: usize) -> Result<BigInt, EngineError> {
    if let StatisticId::Klazar(tau) = stat {
        if tau.block_count() != 2 {
            return Err(EngineError::NoClosedForm(alloc::format!("{stat}")));
        }
    }
    let m = n as i64;
    let v = match stat {
        StatisticId::Blocks => {
            if n >= 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
        _ if n < 2 => BigInt::zero(),
        StatisticId::Los => BigInt::from(m - 1) * p2(m - 2),
        StatisticId::Inv => {
            if n < 3 {
                BigInt::zero()
            } else {
                binomial_signed(m - 1, 2) * p2(m - 3)
            }
        }
        StatisticId::Crol | StatisticId::Nest2 => {
            if n < 4 {
                BigInt::zero()
            } else {
                BigInt::from(m - 5) * p2(m - 2) + (m + 1)
            }
        }
        StatisticId::Croc => match n {
            0..=3 => BigInt::zero(),
            4 => BigInt::one(),
            _ => BigInt::from(m) * p2(m - 2) + 4 * m - 2 * m * m,
        },
        StatisticId::Ov | StatisticId::StrongEmb => p2(m - 2) - m + 1,
        StatisticId::Emb => p2(m - 2) - 1,
        StatisticId::Occ(sigma) => {
            let r = sigma.len() as i64;
            if m < r {
                BigInt::zero()
            } else if sigma.first_letter() == 2 {
                binomial_signed(m - 1, r) * p2(m - r - 1)
            } else {
                binomial_signed(m - 1, r - 1) * p2(m - r) + binomial_signed(m - 1, r) * p2(m - r - 1)
            }
        }
        StatisticId::Klazar(tau) => {
            let r = tau.len() as i64;
            if m < r {
                BigInt::zero()
            } else {
                binomial_signed(m, r) * p2(m - r)
            }
        }
    };
    Ok(v)
}

/// `Σ_{π ∈ Π_n^k} stat(π)` from the v-sequence.
pub fn total_nk(v: &VSequence, tables: &CountTables, n: usize, k: usize) -> Result<BigInt, EngineError> {
    if v.values.len() <= n {
        return Err(EngineError::InsufficientSequence {
            need: n,
            have: v.max_m(),
        });
    }
    if tables.max_n() < n {
        return Err(EngineError::TablesTooSmall {
            need: n,
            have: tables.max_n(),
        });
    }
    let mut total = BigInt::zero();
    if k < v.depth {
        return Ok(total);
    }
    let rest = (k - v.depth) as i64;
    for (m, vm) in v.values.iter().enumerate().take(n + 1) {
        if vm.is_zero() {
            continue;
        }
        let s = tables.stirling2((n - m) as i64, rest);
        if s.is_zero() {
            continue;
        }
        total += binomial(n as u64, m as u64) * s * vm;
    }
    Ok(total)
}

pub fn mean_nk_engine(v: &VSequence, tables: &CountTables, n: usize, k: usize) -> Result<MeanReport, EngineError> {
    let total = total_nk(v, tables, n, k)?;
    let count = tables.stirling2(n as i64, k as i64);
    if count.is_zero() {
        return Err(EngineError::DivisionByZeroCount { n, k });
    }
    Ok(MeanReport::new(n, Some(k), total, count))
}

pub fn mean_n_engine(v: &VSequence, tables: &CountTables, n: usize) -> Result<MeanReport, EngineError> {
    let mut total = BigInt::zero();
    for k in 0..=n {
        total += total_nk(v, tables, n, k)?;
    }
    Ok(MeanReport::new(n, None, total, tables.bell(n as i64)))
}

/// Sum of the statistic over `Π_n^k` (or `Π_n` when `k` is `None`) by
/// enumeration.
pub fn brute_total(stat: &StatisticId, n: usize, k: Option<usize>) -> BigInt {
    let sum: u128 = match k {
        Some(k) => enumerate_k(n, k).map(|p| u128::from(stat.evaluate(&p))).sum(),
        None => enumerate_all(n).map(|p| u128::from(stat.evaluate(&p))).sum(),
    };
    sum.into()
}

/// Mean by enumeration; `None` when the family is empty.
pub fn brute_mean(stat: &StatisticId, n: usize, k: Option<usize>) -> Option<MeanReport> {
    let mut count = 0u64;
    let mut total = 0u128;
    let mut visit = |p: crate::partitions::SetPartition| {
        count += 1;
        total += u128::from(stat.evaluate(&p));
    };
    match k {
        Some(k) => enumerate_k(n, k).for_each(&mut visit),
        None => enumerate_all(n).for_each(&mut visit),
    }
    (count > 0).then(|| MeanReport::new(n, k, total.into(), &count.into()))
}
