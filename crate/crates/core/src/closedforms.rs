//! Closed formulas for the mean values, in exact rational arithmetic.
//!
//! `μ_n` is the mean over all partitions of `[n]` and `μ_{n,k}` the mean over
//! partitions with exactly `k` blocks. Every evaluator reads Bell and Stirling
//! numbers from a [`CountTables`] that must cover `n + 2`.
//!
//! Two families have a theorem form and a derivation form that disagree.
//! Both are available through [`FormulaVariant`]; the canonical one is the form that
//! agrees with exhaustive enumeration.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::exactnum::{binomial, binomial_signed, falling_factorial, int_rat, rat, CountTables};
use crate::statistics::{Pattern2, StatisticId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClosedError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("count tables cover n up to {have}, need {need}")]
    TablesTooSmall { need: usize, have: usize },
    #[error("no closed form for {0}")]
    NoClosedForm(String),
}

type Result<T> = core::result::Result<T, ClosedError>;

/// Which printed form of a formula to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FormulaVariant {
    /// The form that matches enumeration.
    #[default]
    Canonical,
    /// The form stated with the theorem.
    Theorem,
    /// The form reached at the end of the derivation.
    Derivation,
}

impl FormulaVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaVariant::Canonical => "canonical",
            FormulaVariant::Theorem => "theorem",
            FormulaVariant::Derivation => "derivation",
        }
    }

    fn is_theorem(self) -> bool {
        self == FormulaVariant::Theorem
    }
}

impl core::str::FromStr for FormulaVariant {
    type Err = ClosedError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(FormulaVariant::Canonical),
            "theorem" => Ok(FormulaVariant::Theorem),
            "derivation" => Ok(FormulaVariant::Derivation),
            _ => Err(ClosedError::OutOfRange(alloc::format!("unknown variant {s:?}"))),
        }
    }
}

fn need(t: &CountTables, n: usize) -> Result<()> {
    if t.max_n() < n + 2 {
        return Err(ClosedError::TablesTooSmall {
            need: n + 2,
            have: t.max_n(),
        });
    }
    Ok(())
}

fn check_n(t: &CountTables, n: usize) -> Result<()> {
    if n == 0 {
        return Err(ClosedError::OutOfRange("n must be at least 1".into()));
    }
    need(t, n)
}

fn check_nk(t: &CountTables, n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(ClosedError::OutOfRange(alloc::format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    need(t, n)
}

fn r(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

fn ri(n: usize) -> BigRational {
    r(n as i64, 1)
}

/// `C(n, j)` with `C(n, j) = 0` for `j < 0` or `j > n`.
fn c(n: usize, j: i64) -> BigRational {
    int_rat(&binomial_signed(n as i64, j))
}

fn ff(n: usize, j: u64) -> BigRational {
    int_rat(&falling_factorial(n as i64, j))
}

/// `B_i / B_n`.
fn bq(t: &CountTables, i: i64, n: usize) -> BigRational {
    BigRational::new(t.bell(i).clone(), t.bell(n as i64).clone())
}

/// `S_{i,j} / S_{n,k}`.
fn sq(t: &CountTables, i: i64, j: i64, n: usize, k: usize) -> BigRational {
    BigRational::new(t.stirling2(i, j).clone(), t.stirling2(n as i64, k as i64).clone())
}

fn ck2(k: usize) -> BigRational {
    c(k, 2)
}

pub fn mean_los(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    Ok(-r(1, 4) * bq(t, m + 2, n) + r(2 * m + 1, 4) * bq(t, m + 1, n) + r(1 - 2 * m, 4))
}

pub fn mean_los_k(t: &CountTables, n: usize, k: usize) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j) = (n as i64, k as i64);
    Ok(r(m * (j - 1), 2) - ck2(k) / ri(2) + r(m + 1 - j, 2) * sq(t, m, j - 1, n, k))
}

/// Mean of `los` shifted by `-C(k, 2)` on each `Π_n^k`.
pub fn mean_los_tilde(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    Ok(-r(3, 4) * bq(t, m + 2, n) + r(2 * m + 7, 4) * bq(t, m + 1, n) - r(2 * m + 1, 4))
}

pub fn mean_los_tilde_k(t: &CountTables, n: usize, k: usize) -> Result<BigRational> {
    Ok(mean_los_k(t, n, k)? - ck2(k))
}

pub fn mean_crol(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    Ok(-r(5, 4) * bq(t, m + 2, n) + r(2 * m + 9, 4) * bq(t, m + 1, n) + r(2 * m + 1, 4))
}

pub fn mean_crol_k(t: &CountTables, n: usize, k: usize) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j) = (n as i64, k as i64);
    Ok(r(m * (j - 1), 2) - r(5, 2) * ck2(k) + r(3 * (m + 1 - j), 2) * sq(t, m, j - 1, n, k))
}

pub fn mean_croc(t: &CountTables, n: usize, variant: FormulaVariant) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    let b_minus_2 = if variant.is_theorem() { c(n, 2) } else { ff(n, 2) };
    Ok(r(m, 2) * bq(t, m + 1, n) + r(3 * m, 2)
        - r(m * (4 * m + 1), 2) * bq(t, m - 1, n)
        - b_minus_2 * bq(t, m - 2, n)
        + ff(n, 4) / ri(24) * bq(t, m - 4, n))
}

pub fn mean_croc_k(t: &CountTables, n: usize, k: usize, variant: FormulaVariant) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j) = (n as i64, k as i64);
    let s11 = sq(t, m - 1, j - 1, n, k);
    let s22 = sq(t, m - 2, j - 2, n, k);
    let s42 = sq(t, m - 4, j - 2, n, k);
    let head = r(m * (j - 1), 2);
    Ok(if variant.is_theorem() {
        head - r(m * (4 * m - 5 * j + 1), 2) * s11 - ri(10) * c(n, 2) * s22 + c(n, 4) * s42
    } else {
        head + r(m * (5 * j - 4 * m - 1), 2) * s11 - ff(n, 2) * s22 + ff(n, 4) / ri(24) * s42
    })
}

pub fn mean_ov(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    Ok(r(1, 4) * bq(t, m + 2, n) + r(3, 4) * bq(t, m + 1, n) - r(4 * m + 5, 4) - r(m, 2) * bq(t, m - 1, n))
}

pub fn mean_ov_k(t: &CountTables, n: usize, k: usize, variant: FormulaVariant) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j) = (n as i64, k as i64);
    let s01 = sq(t, m, j - 1, n, k);
    let s11 = sq(t, m - 1, j - 1, n, k);
    Ok(if variant.is_theorem() {
        ck2(k) / ri(2) + ri(n * (k - 1)) * s11 - r(3 * (m + j - 1), 2) * s01
    } else {
        r(j * (j - 1), 4) - r(3 * (m + 1 - j), 2) * s01 + r(m * (j - 1), 2) * s11
    })
}

pub fn mean_emb(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    Ok(r(1, 4) * bq(t, m + 2, n) - r(5, 4) * bq(t, m + 1, n) + r(3, 4) + r(m, 2) * bq(t, m - 1, n))
}

pub fn mean_emb_k(t: &CountTables, n: usize, k: usize) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j) = (n as i64, k as i64);
    Ok(ck2(k) / ri(2) - r(j - 1, 2) * sq(t, m, j - 1, n, k) + r(m, 2) * sq(t, m - 1, j - 2, n, k))
}

pub fn mean_inv(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    let m = n as i64;
    Ok(r(1, 8) * bq(t, m + 2, n) - r(2 * m + 1, 8) * bq(t, m + 1, n) + r(2 * m * m - 1, 8)
        - ff(n, 2) / ri(4) * bq(t, m - 1, n))
}

pub fn mean_inv_k(t: &CountTables, n: usize, k: usize) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j) = (n as i64, k as i64);
    Ok(r(m * (m - j - 1), 4) * (BigRational::one() - r(1, j)) + r(j * (j - 1), 8)
        - r(m + 1 - j, 4) * sq(t, m, j - 1, n, k)
        + r(m * (m - 1), 4 * j) * sq(t, m - 1, j - 1, n, k))
}

/// `p_j(n) = (-1)^{r-j} / 2^{r-j+1} · (C(n, j) + C(n, j-1) / 2)`.
fn p_j(n: usize, r_len: usize, j: usize) -> BigRational {
    let e = (r_len - j) as u32;
    let sign = if e.is_multiple_of(2) { 1 } else { -1 };
    let scale = BigRational::new(BigInt::from(sign), BigInt::from(2u8).pow(e + 1));
    scale * (c(n, j as i64) + c(n, j as i64 - 1) / ri(2))
}

fn check_pattern(r_len: usize, first: u8) -> Result<()> {
    if r_len < 2 || !(first == 1 || first == 2) {
        return Err(ClosedError::OutOfRange(alloc::format!(
            "need pattern length >= 2 and first letter 1 or 2, got r={r_len}, first={first}"
        )));
    }
    Ok(())
}

/// Signed `(-1)^e / 2^{r+1}` constant of the occurrence formulas.
fn occ_constant(r_len: usize, first: u8) -> BigRational {
    let e = if first == 2 { r_len + 1 } else { r_len };
    let sign = if e % 2 == 0 { 1 } else { -1 };
    BigRational::new(BigInt::from(sign), BigInt::from(2u8).pow(r_len as u32 + 1))
}

/// Mean occurrences over `Π_n` of any 2-pattern of length `r` starting with
/// `first`. Defined for every `n >= 0`.
pub fn mean_occ_first(t: &CountTables, n: usize, r_len: usize, first: u8) -> Result<BigRational> {
    check_pattern(r_len, first)?;
    need(t, n)?;
    let m = n as i64;
    let rr = r_len as i64;
    let q = |i: i64| bq(t, i, n);
    let mut acc = -c(n, rr) / ri(2) * q(m + 1 - rr) + occ_constant(r_len, first);
    if first == 2 {
        for j in 0..=r_len {
            acc += p_j(n, r_len, j) * q(m + 2 - j as i64);
        }
    } else {
        for j in 0..r_len {
            acc -= p_j(n, r_len, j) * q(m + 2 - j as i64);
        }
        acc += (c(n, rr) - c(n, rr - 1) / ri(2)) / ri(2) * q(m + 2 - rr);
    }
    Ok(acc)
}

pub fn mean_occ_first_k(t: &CountTables, n: usize, k: usize, r_len: usize, first: u8) -> Result<BigRational> {
    check_pattern(r_len, first)?;
    check_nk(t, n, k)?;
    let (m, kk) = (n as i64, k as i64);
    let rr = r_len as i64;
    let q = |i: i64, j: i64| sq(t, i, j, n, k);
    let mut acc = -c(n, rr) / ri(2) * q(m + 1 - rr, kk) + occ_constant(r_len, first) * q(m, kk - 2);
    if first == 2 {
        for j in 0..=r_len {
            acc += p_j(n, r_len, j) * q(m + 2 - j as i64, kk);
        }
    } else {
        for j in 0..r_len {
            acc -= p_j(n, r_len, j) * q(m + 2 - j as i64, kk);
        }
        acc += (c(n, rr) - c(n, rr - 1) / ri(2)) / ri(2) * q(m + 2 - rr, kk);
    }
    Ok(acc)
}

/// Right-hand side of the connecting relation: `μ^{(1)} + μ^{(2)}` over `Π_n`.
pub fn occ_connecting_sum(t: &CountTables, n: usize, r_len: usize) -> Result<BigRational> {
    need(t, n)?;
    let (m, rr) = (n as i64, r_len as i64);
    Ok(c(n, rr) * (bq(t, m + 2 - rr, n) - bq(t, m + 1 - rr, n)))
}

/// `μ_{n,k}^{(1)} + μ_{n,k}^{(2)}`.
pub fn occ_connecting_sum_k(t: &CountTables, n: usize, k: usize, r_len: usize) -> Result<BigRational> {
    check_nk(t, n, k)?;
    let (m, j, rr) = (n as i64, k as i64, r_len as i64);
    Ok(c(n, rr) * (sq(t, m + 2 - rr, j, n, k) - sq(t, m + 1 - rr, j, n, k)))
}

/// The expanded single-pattern formulas for patterns of length 2 and 3,
/// written out independently of [`mean_occ_first`].
pub fn mean_occ_explicit(t: &CountTables, n: usize, sigma: &Pattern2) -> Result<BigRational> {
    need(t, n)?;
    let m = n as i64;
    let q = |i: i64| bq(t, i, n);
    let word = sigma.word();
    let value = match (word.len(), word[0]) {
        (2, 2) => {
            r(1, 8) * q(m + 2) - r(2 * m + 1, 8) * q(m + 1) + r(2 * m * m - 1, 8)
                - c(n, 2) / ri(2) * q(m - 1)
        }
        (2, 1) => {
            -r(1, 8) * q(m + 2) + r(2 * m + 1, 8) * q(m + 1) + r(2 * m * m - 4 * m + 1, 8)
                - c(n, 2) / ri(2) * q(m - 1)
        }
        (3, 2) => {
            -r(1, 16) * q(m + 2) + r(2 * m + 1, 16) * q(m + 1) - r(2 * m * m - 1, 16)
                + r(m * (2 * m - 1) * (m - 1), 24) * q(m - 1)
                - c(n, 3) / ri(2) * q(m - 2)
        }
        (3, 1) => {
            r(1, 16) * q(m + 2) - r(2 * m + 1, 16) * q(m + 1) + r(2 * m * m - 1, 16)
                + r(m * (m - 1) * (2 * m - 7), 24) * q(m - 1)
                - c(n, 3) / ri(2) * q(m - 2)
        }
        _ => {
            return Err(ClosedError::NoClosedForm(alloc::format!(
                "explicit formula for occ:{sigma}"
            )))
        }
    };
    Ok(value)
}

/// Mean occurrences over `Π_n` of a fixed two-block pattern partition of `[r]`.
pub fn mean_klazar(t: &CountTables, n: usize, r_len: usize) -> Result<BigRational> {
    if r_len < 2 || r_len > n {
        return Err(ClosedError::OutOfRange(alloc::format!(
            "need 2 <= r <= n, got n={n}, r={r_len}"
        )));
    }
    occ_connecting_sum(t, n, r_len)
}

pub fn mean_blocks(t: &CountTables, n: usize) -> Result<BigRational> {
    check_n(t, n)?;
    Ok(bq(t, n as i64 + 1, n) - BigRational::one())
}

/// Mean linear crossings over partitions of `[mk]` into `k` blocks of size `m`.
pub fn regular_linear_mean(m: usize, k: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(ClosedError::OutOfRange("block size must be positive".into()));
    }
    let central = int_rat(&binomial(2 * m as u64, m as u64));
    Ok(ck2(k) * (ri(m) - ri(2) + ri(2) / central))
}

/// Mean circular crossings over partitions of `[mk]` into `k` blocks of size
/// `m >= 3`.
pub fn regular_circular_mean(m: usize, k: usize) -> Result<BigRational> {
    if m < 3 {
        return Err(ClosedError::OutOfRange("circular formula needs block size >= 3".into()));
    }
    let central = int_rat(&binomial(2 * m as u64, m as u64));
    let mm = m as i64;
    Ok(ck2(k) * (ri(m) + r(1, 2) + r(1, 2 * (2 * mm - 1)) - ri(4 * m) / central))
}

/// Closed-form mean of a statistic over `Π_n` (`k = None`) or `Π_n^k`.
pub fn closed_mean(
    stat: &StatisticId,
    t: &CountTables,
    n: usize,
    k: Option<usize>,
    variant: FormulaVariant,
) -> Result<BigRational> {
    use StatisticId as S;
    match (stat, k) {
        (S::Los, None) => mean_los(t, n),
        (S::Los, Some(k)) => mean_los_k(t, n, k),
        (S::Inv, None) => mean_inv(t, n),
        (S::Inv, Some(k)) => mean_inv_k(t, n, k),
        (S::Crol | S::Nest2, None) => mean_crol(t, n),
        (S::Crol | S::Nest2, Some(k)) => mean_crol_k(t, n, k),
        (S::Croc, None) => mean_croc(t, n, variant),
        (S::Croc, Some(k)) => mean_croc_k(t, n, k, variant),
        (S::Ov | S::StrongEmb, None) => mean_ov(t, n),
        (S::Ov | S::StrongEmb, Some(k)) => mean_ov_k(t, n, k, variant),
        (S::Emb, None) => mean_emb(t, n),
        (S::Emb, Some(k)) => mean_emb_k(t, n, k),
        (S::Occ(sigma), None) => mean_occ_first(t, n, sigma.len(), sigma.first_letter()),
        (S::Occ(sigma), Some(k)) => mean_occ_first_k(t, n, k, sigma.len(), sigma.first_letter()),
        (S::Klazar(tau), None) if tau.block_count() == 2 => mean_klazar(t, n, tau.len()),
        (S::Blocks, None) => mean_blocks(t, n),
        (S::Blocks, Some(k)) => {
            check_nk(t, n, k)?;
            Ok(ri(k))
        }
        _ => Err(ClosedError::NoClosedForm(match k {
            Some(k) => alloc::format!("{stat} at n={n}, k={k}"),
            None => alloc::format!("{stat} at n={n}"),
        })),
    }
}

/// One entry of the formula catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaInfo {
    pub name: &'static str,
    pub domain: &'static str,
    pub variant: FormulaVariant,
    pub canonical: bool,
}

/// Every evaluator with its domain; formulas with two forms appear once per
/// form.
pub fn catalog() -> Vec<FormulaInfo> {
    let one = |name, domain| FormulaInfo {
        name,
        domain,
        variant: FormulaVariant::Canonical,
        canonical: true,
    };
    let pair = |name, domain| {
        [
            FormulaInfo {
                name,
                domain,
                variant: FormulaVariant::Derivation,
                canonical: true,
            },
            FormulaInfo {
                name,
                domain,
                variant: FormulaVariant::Theorem,
                canonical: false,
            },
        ]
    };
    let mut out = alloc::vec![
        one("mean_los", "n >= 1"),
        one("mean_los_k", "1 <= k <= n"),
        one("mean_los_tilde", "n >= 1"),
        one("mean_los_tilde_k", "1 <= k <= n"),
        one("mean_crol", "n >= 1"),
        one("mean_crol_k", "1 <= k <= n"),
    ];
    out.extend(pair("mean_croc", "n >= 1"));
    out.extend(pair("mean_croc_k", "1 <= k <= n"));
    out.push(one("mean_ov", "n >= 1"));
    out.extend(pair("mean_ov_k", "1 <= k <= n"));
    out.extend([
        one("mean_emb", "n >= 1"),
        one("mean_emb_k", "1 <= k <= n"),
        one("mean_inv", "n >= 1"),
        one("mean_inv_k", "1 <= k <= n"),
        one("mean_occ_first", "n >= 0, r >= 2"),
        one("mean_occ_first_k", "1 <= k <= n, r >= 2"),
        one("mean_occ_explicit", "n >= 0, r in {2, 3}"),
        one("mean_klazar", "2 <= r <= n"),
        one("mean_blocks", "n >= 1"),
        one("regular_linear_mean", "m >= 1, k >= 0"),
        one("regular_circular_mean", "m >= 3, k >= 0"),
    ]);
    out
}
