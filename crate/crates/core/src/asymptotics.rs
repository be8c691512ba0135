//! Leading-order approximations of the means and their agreement with the
//! exact values.
//!
//! Logarithms are natural. The approximations are two-term displays
//! `leading · (1 + correction)`; both parts are exposed so the bare first term
//! can be compared as well. Block-level approximations are polynomials in `n`
//! and `k` and are computed exactly.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::closedforms::{closed_mean, ClosedError, FormulaVariant};
use crate::exactnum::{binomial_signed, int_rat, rat, rat_to_f64, CountTables};
use crate::statistics::StatisticId;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AsymptoticError {
    #[error("asymptotic formulas need n >= 3, got {0}")]
    OutOfRange(usize),
    #[error("no asymptotic formula for {0}")]
    UnknownStatistic(alloc::string::String),
    #[error(transparent)]
    Closed(#[from] ClosedError),
}

type Result<T> = core::result::Result<T, AsymptoticError>;

fn logs(n: usize) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(AsymptoticError::OutOfRange(n));
    }
    let l = libm::log(n as f64);
    Ok((l, libm::log(l)))
}

/// `(n / ln n)^r · (1 + r · ln ln n / ln n)`, the two-term approximation of
/// `B_{n+r} / B_n`.
pub fn bell_quotient_leading(n: usize, r: i32) -> Result<f64> {
    let (l, ll) = logs(n)?;
    Ok(libm::pow(n as f64 / l, f64::from(r)) * (1.0 + f64::from(r) * ll / l))
}

/// Limit of `S_{n-i,k-j} / S_{n,k}` as `n → ∞`: `k^{-i}` when `j = 0`, and 0
/// otherwise since the quotient decays like `(1 - j/k)^n`.
pub fn stirling_quotient_leading(k: usize, i: u32, j: u32) -> f64 {
    if j > 0 || k == 0 {
        0.0
    } else {
        libm::pow(k as f64, -f64::from(i))
    }
}

/// A two-term approximation `leading · (1 + correction)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approximation {
    pub leading: f64,
    pub correction: f64,
}

impl Approximation {
    pub fn value(&self) -> f64 {
        self.leading * (1.0 + self.correction)
    }
}

/// The approximation of `μ_n`.
///
/// For patterns of length 2 starting with `1`, the theorem form repeats the
/// correction of the patterns starting with `2`; it cannot hold for both
/// since the two means add up to `C(n,2)(1 - B_{n-1}/B_n)`. `Theorem`
/// returns that form, every other variant the form implied by the sum.
pub fn approximation(stat: &StatisticId, n: usize, variant: FormulaVariant) -> Result<Approximation> {
    let (l, ll) = logs(n)?;
    let nf = n as f64;
    let approx = match stat {
        StatisticId::Los | StatisticId::Crol | StatisticId::Nest2 | StatisticId::Croc => Approximation {
            leading: nf * nf / (2.0 * l),
            correction: ll / l,
        },
        StatisticId::Ov | StatisticId::StrongEmb | StatisticId::Emb => Approximation {
            leading: 0.25 * (nf / l) * (nf / l),
            correction: 2.0 * ll / l,
        },
        StatisticId::Inv => occ2_approximation(nf, l, ll, 2, variant),
        StatisticId::Occ(sigma) if sigma.len() == 2 => occ2_approximation(nf, l, ll, sigma.first_letter(), variant),
        StatisticId::Occ(sigma) => {
            let r = sigma.len() as i32;
            let fact: f64 = (1..=r).map(f64::from).product();
            Approximation {
                leading: nf * nf * libm::pow(l, f64::from(r - 2)) / (2.0 * fact),
                correction: -f64::from(r - 2) * ll / l,
            }
        }
        StatisticId::Blocks => Approximation {
            leading: nf / l,
            correction: ll / l,
        },
        StatisticId::Klazar(_) => return Err(AsymptoticError::UnknownStatistic(alloc::format!("{stat}"))),
    };
    Ok(approx)
}

fn occ2_approximation(nf: f64, l: f64, ll: f64, first: u8, variant: FormulaVariant) -> Approximation {
    let sign = if first == 1 && variant != FormulaVariant::Theorem { 1.0 } else { -1.0 };
    Approximation {
        leading: nf * nf / 4.0,
        correction: sign * (1.0 / l + ll / (l * l)),
    }
}

/// Two-term approximation of `μ_n`, canonical form.
pub fn asymptotic_mean(stat: &StatisticId, n: usize) -> Result<f64> {
    Ok(approximation(stat, n, FormulaVariant::Canonical)?.value())
}

/// `Σ_{j=lo}^{hi} p_j(n) k^{2-j}` for the occurrence formulas.
fn occ_poly_sum(n: usize, k: usize, r_len: usize, hi: usize) -> BigRational {
    let mut acc = BigRational::zero();
    let kk = BigInt::from(k);
    for j in 0..=hi {
        let e = r_len - j;
        let sign = if e.is_multiple_of(2) { 1 } else { -1 };
        let p = rat(sign, 1) / int_rat(&BigInt::from(2u8).pow(e as u32 + 1))
            * (int_rat(&binomial_signed(n as i64, j as i64))
                + int_rat(&binomial_signed(n as i64, j as i64 - 1)) / rat(2, 1));
        let power = if j <= 2 {
            int_rat(&kk.pow((2 - j) as u32))
        } else {
            BigRational::one() / int_rat(&kk.pow((j - 2) as u32))
        };
        acc += p * power;
    }
    acc
}

/// `k^e` for a possibly negative exponent.
fn kpow(k: usize, e: i64) -> BigRational {
    let base = BigInt::from(k);
    if e >= 0 {
        int_rat(&base.pow(e as u32))
    } else {
        BigRational::one() / int_rat(&base.pow((-e) as u32))
    }
}

/// The polynomial part of `μ_{n,k}` for fixed `k`: the exact mean differs from
/// it by terms that decay exponentially in `n`.
pub fn leading_polynomial_k(stat: &StatisticId, n: usize, k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(AsymptoticError::Closed(ClosedError::OutOfRange("k must be positive".into())));
    }
    let (m, j) = (n as i64, k as i64);
    let ck2 = rat(j * (j - 1), 2);
    let v = match stat {
        StatisticId::Los => rat(m * (j - 1), 2) - ck2 / rat(2, 1),
        StatisticId::Crol | StatisticId::Nest2 => rat(m * (j - 1), 2) - rat(5, 2) * ck2,
        StatisticId::Croc => rat(m * (j - 1), 2),
        StatisticId::Ov | StatisticId::StrongEmb | StatisticId::Emb => ck2 / rat(2, 1),
        StatisticId::Inv => rat(m * (m - j - 1), 4) * (BigRational::one() - rat(1, j)) + rat(j * (j - 1), 8),
        StatisticId::Occ(sigma) => {
            let r_len = sigma.len();
            let cnr = int_rat(&binomial_signed(m, r_len as i64));
            let tail = -cnr.clone() / rat(2, 1) * kpow(k, 1 - r_len as i64);
            if sigma.first_letter() == 2 {
                occ_poly_sum(n, k, r_len, r_len) + tail
            } else {
                -occ_poly_sum(n, k, r_len, r_len) + cnr * kpow(k, 2 - r_len as i64) + tail
            }
        }
        StatisticId::Blocks => rat(j, 1),
        StatisticId::Klazar(_) => return Err(AsymptoticError::UnknownStatistic(alloc::format!("{stat}"))),
    };
    Ok(v)
}

/// Float rendering of [`leading_polynomial_k`].
pub fn asymptotic_mean_k(stat: &StatisticId, n: usize, k: usize) -> Result<f64> {
    Ok(rat_to_f64(&leading_polynomial_k(stat, n, k)?))
}

/// Exact mean against its approximation at one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub n: usize,
    pub exact: BigRational,
    /// Bare first term.
    pub leading: f64,
    /// First term times `1 + correction`.
    pub corrected: f64,
    /// `exact / leading`.
    pub ratio: f64,
    /// `exact / corrected`.
    pub correction_ratio: f64,
}

/// One report per grid point, exact values from the canonical closed forms.
/// The tables must cover the largest grid point plus two.
pub fn convergence_report(
    stat: &StatisticId,
    tables: &CountTables,
    grid: &[usize],
    variant: FormulaVariant,
) -> Result<Vec<AsymptoticReport>> {
    grid.iter()
        .map(|&n| {
            let approx = approximation(stat, n, variant)?;
            let exact = closed_mean(stat, tables, n, None, FormulaVariant::Canonical)?;
            let x = rat_to_f64(&exact);
            Ok(AsymptoticReport {
                n,
                exact,
                leading: approx.leading,
                corrected: approx.value(),
                ratio: x / approx.leading,
                correction_ratio: x / approx.value(),
            })
        })
        .collect()
}

/// Exact `μ_{n,k}` against its polynomial part at one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockAsymptoticReport {
    pub n: usize,
    pub k: usize,
    pub exact: BigRational,
    pub leading: BigRational,
    /// `|exact - leading|` as a float.
    pub gap: f64,
}

pub fn convergence_report_k(
    stat: &StatisticId,
    tables: &CountTables,
    k: usize,
    grid: &[usize],
) -> Result<Vec<BlockAsymptoticReport>> {
    grid.iter()
        .map(|&n| {
            let exact = closed_mean(stat, tables, n, Some(k), FormulaVariant::Canonical)?;
            let leading = leading_polynomial_k(stat, n, k)?;
            let diff = &exact - &leading;
            let gap = rat_to_f64(&diff).abs();
            Ok(BlockAsymptoticReport {
                n,
                k,
                exact,
                leading,
                gap,
            })
        })
        .collect()
}
