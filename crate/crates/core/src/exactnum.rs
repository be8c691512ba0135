//! Arbitrary-precision counting numbers.
//!
//! All values here are exact. Bell and Stirling numbers live in an immutable
//! [`CountTables`] built once for a caller-chosen bound; a larger bound means
//! building a new table with [`CountTables::extended`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signed arbitrary-precision integer.
pub type ExactInt = BigInt;

/// Rational in lowest terms with a positive denominator.
pub type ExactRat = BigRational;

/// Memoized Bell numbers `B_0..=B_N` and the Stirling triangle `S_{n,k}`,
/// `0 <= k <= n <= N`.
///
/// Lookups accept signed indices so that closed formulas can be written with
/// shifted arguments such as `S_{n-4,k-2}`: any negative index, and any
/// `k > n`, reads as zero. Reading a row above `N` is a caller bug and panics.
#[derive(Clone, Debug)]
pub struct CountTables {
    bell: Vec<BigInt>,
    stirling: Vec<Vec<BigInt>>,
    zero: BigInt,
}

impl CountTables {
    pub fn new(max_n: usize) -> Self {
        let mut stirling: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        stirling.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let prev = &stirling[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::zero());
            for k in 1..=n {
                let keep = if k < n { &prev[k] * k } else { BigInt::zero() };
                row.push(&prev[k - 1] + keep);
            }
            stirling.push(row);
        }
        let bell = stirling
            .iter()
            .map(|row| row.iter().fold(BigInt::zero(), |acc, s| acc + s))
            .collect();
        CountTables {
            bell,
            stirling,
            zero: BigInt::zero(),
        }
    }

    /// Largest `n` covered by the table.
    pub fn max_n(&self) -> usize {
        self.bell.len() - 1
    }

    /// A table covering at least `max_n`. Returns a clone when `self` already does.
    pub fn extended(&self, max_n: usize) -> Self {
        if max_n <= self.max_n() {
            self.clone()
        } else {
            CountTables::new(max_n)
        }
    }

    pub fn stirling2(&self, n: i64, k: i64) -> &BigInt {
        if n < 0 || k < 0 || k > n {
            return &self.zero;
        }
        let n = n as usize;
        assert!(
            n <= self.max_n(),
            "Stirling row {n} requested from a table built up to {}",
            self.max_n()
        );
        &self.stirling[n][k as usize]
    }

    /// `B_n`, with `B_n = 0` for negative `n`.
    pub fn bell(&self, n: i64) -> &BigInt {
        if n < 0 {
            return &self.zero;
        }
        let n = n as usize;
        assert!(
            n <= self.max_n(),
            "Bell number {n} requested from a table built up to {}",
            self.max_n()
        );
        &self.bell[n]
    }

    /// The row `S_{n,0..=n}`.
    pub fn stirling_row(&self, n: usize) -> &[BigInt] {
        &self.stirling[n]
    }
}

/// `S_{n,k}` computed on its own through the triangle recurrence.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    // one row of width k+1 is enough
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for m in 1..=n {
        let top = m.min(k);
        for j in (1..=top).rev() {
            let keep = &row[j] * j;
            row[j] = &row[j - 1] + keep;
        }
        row[0] = BigInt::zero();
    }
    row.swap_remove(k)
}

/// `S_{n,k}` from the alternating binomial sum `(1/k!) Σ_j (-1)^j C(k,j) (k-j)^n`.
pub fn stirling2_summation(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = binomial(u64::from(k), u64::from(j)) * num_traits::pow(BigInt::from(k - j), n as usize);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    // 0^0 = 1 is what makes S_{0,0} = 1 come out right
    let (q, r) = acc.div_rem(&factorial(u64::from(k)));
    debug_assert!(r.is_zero());
    q
}

/// `B_n` as the `n`-th row sum of the Stirling triangle.
pub fn bell(n: usize) -> BigInt {
    CountTables::new(n).bell(n as i64).clone()
}

/// `C(n, k)` for `n >= 0`. Zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` extended by zero to negative `n` or `k`. Only used where a
/// formula shifts the lower index below zero.
pub(crate) fn binomial_signed(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 {
        BigInt::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Lower factorial `x (x-1) ... (x-k+1)`.
pub fn falling_factorial(x: i64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(x) - i;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub(crate) fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

pub(crate) fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Correctly rounded (round-half-even) binary64 value of an exact rational.
///
/// Results in the subnormal range may be double-rounded; no quantity in this
/// crate gets anywhere near it.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let num: BigUint = r.numer().magnitude().clone();
    let den: BigUint = r.denom().magnitude().clone();
    // scale so the integer quotient carries 65..=67 significant bits
    let shift = 66 - (num.bits() as i64 - den.bits() as i64);
    let (a, b) = if shift >= 0 {
        (num << shift as u64, den)
    } else {
        (num, den << (-shift) as u64)
    };
    let (q, rem) = a.div_rem(&b);
    let q = q.to_u128().expect("quotient has at most 67 bits");
    let sticky = !rem.is_zero();
    let qbits = 128 - q.leading_zeros() as i64;
    let drop = qbits - 53;
    let mut mantissa = q >> drop;
    let low = q & ((1u128 << drop) - 1);
    let half = 1u128 << (drop - 1);
    if low > half || (low == half && (sticky || mantissa & 1 == 1)) {
        mantissa += 1;
    }
    let value = libm::ldexp(mantissa as f64, (drop - shift) as i32);
    if negative {
        -value
    } else {
        value
    }
}

pub fn int_to_f64(n: &BigInt) -> f64 {
    rat_to_f64(&BigRational::from_integer(n.clone()))
}

/// Polynomial in `q` with exact integer coefficients, stored densely by
/// ascending power. Trailing zero coefficients are always trimmed, so the
/// zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `q^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        QPolynomial { coeffs }
    }

    /// `[k]_q = 1 + q + ... + q^{k-1}`; `[0]_q = 0`.
    pub fn q_integer(k: usize) -> Self {
        QPolynomial {
            coeffs: vec![BigInt::one(); k],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiply by `q^d`.
    pub fn shifted(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }

    /// Add `c * q^i` in place.
    pub fn add_term(&mut self, i: usize, c: &BigInt) {
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, BigInt::zero());
        }
        self.coeffs[i] += c;
        self.trim();
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc + c)
    }

    /// `P'(1) = Σ i c_i`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, c)| acc + c * i)
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.sign() == Sign::Minus { " - " } else { " + " })?;
            } else if c.sign() == Sign::Minus {
                f.write_str("-")?;
            }
            first = false;
            let mag = c.magnitude();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rows `S_{m,0..=m}(q)` of Carlitz's q-Stirling triangle for `m = 0..=n`,
/// from `S_{m,k}(q) = q^{k-1} S_{m-1,k-1}(q) + [k]_q S_{m-1,k}(q)` with
/// `S_{m,k}(q) = δ_{m,k}` when `m = 0` or `k = 0`.
pub fn q_stirling_rows(n: usize) -> Vec<Vec<QPolynomial>> {
    let mut rows: Vec<Vec<QPolynomial>> = Vec::with_capacity(n + 1);
    rows.push(vec![QPolynomial::one()]);
    for m in 1..=n {
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m + 1);
        row.push(QPolynomial::zero());
        for k in 1..=m {
            let new_block = prev[k - 1].shifted(k - 1);
            let joined = match prev.get(k) {
                Some(p) if !p.is_zero() => p * &QPolynomial::q_integer(k),
                _ => QPolynomial::zero(),
            };
            row.push(&new_block + &joined);
        }
        rows.push(row);
    }
    rows
}

/// Carlitz's q-Stirling polynomial `S_{n,k}(q)`.
pub fn q_stirling_poly(n: usize, k: usize) -> QPolynomial {
    if k > n {
        return QPolynomial::zero();
    }
    q_stirling_rows(n).swap_remove(n).swap_remove(k)
}
