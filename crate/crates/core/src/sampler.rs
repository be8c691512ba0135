//! Uniform random set partitions by exact unranking.
//!
//! Random integers are drawn from ChaCha20 seeded with a `u64`, by rejection
//! on 32-bit chunks, so every partition has probability exactly `1 / B_n`
//! (or `1 / S_{n,k}`) and a seed reproduces the same stream on every
//! platform.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::exactnum::CountTables;
use crate::partitions::SetPartition;
use crate::statistics::StatisticId;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("need 1 <= k <= n, got n={n}, k={k}")]
    OutOfRange { n: usize, k: usize },
    #[error("rank {0} out of range")]
    RankOutOfRange(BigInt),
    #[error("at least one trial is required")]
    NoTrials,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub n: usize,
    pub k: Option<usize>,
    pub seed: u64,
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmpiricalEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub stderr: f64,
    pub trials: u64,
}

/// The generator used for every draw.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Uniform integer in `[0, bound)`.
///
/// # Panics
///
/// If `bound <= 0`.
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: &BigInt) -> BigInt {
    assert!(bound.sign() == Sign::Plus, "bound must be positive");
    let bits = bound.bits();
    let chunks = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (chunks as u64 - 1);
    let mask = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..chunks).map(|_| rng.next_u32()).collect();
        digits[chunks - 1] &= mask;
        let x = BigInt::from(BigUint::new(digits));
        if &x < bound {
            return x;
        }
    }
}

/// Exact probabilities that the block of the smallest element of an `m`-set
/// has size `j = 1..=m`: `C(m-1, j-1) B_{m-j} / B_m`.
pub fn branch_probabilities(tables: &CountTables, m: usize) -> Vec<BigRational> {
    let b = tables.bell(m as i64);
    (1..=m)
        .map(|j| {
            let w = crate::exactnum::binomial(m as u64 - 1, j as u64 - 1) * tables.bell((m - j) as i64);
            BigRational::new(w, b.clone())
        })
        .collect()
}

/// Unranking of `Π_n` by the block of the smallest remaining element.
#[derive(Clone, Debug)]
pub struct PartitionSampler {
    n: usize,
    tables: CountTables,
    /// `binom[a][b] = C(a, b)` for `a < n`.
    binom: Vec<Vec<BigInt>>,
    /// `cum[m][j]` = total weight of block sizes `1..=j` on an `m`-set.
    cum: Vec<Vec<BigInt>>,
}

impl PartitionSampler {
    pub fn new(n: usize) -> Self {
        let tables = CountTables::new(n);
        let mut binom: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = vec![BigInt::one(); a + 1];
            for b in 1..a {
                row[b] = &binom[a - 1][b - 1] + &binom[a - 1][b];
            }
            binom.push(row);
        }
        let mut cum = vec![Vec::new()];
        for m in 1..=n {
            let mut acc = BigInt::zero();
            let mut row = vec![BigInt::zero()];
            for j in 1..=m {
                acc += &binom[m - 1][j - 1] * tables.bell((m - j) as i64);
                row.push(acc.clone());
            }
            cum.push(row);
        }
        PartitionSampler { n, tables, binom, cum }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tables(&self) -> &CountTables {
        &self.tables
    }

    /// The partition of rank `rank` in `[0, B_n)`.
    pub fn unrank(&self, rank: &BigInt) -> Result<SetPartition, SamplerError> {
        if rank.sign() == Sign::Minus || rank >= self.tables.bell(self.n as i64) {
            return Err(SamplerError::RankOutOfRange(rank.clone()));
        }
        let mut word = vec![0u32; self.n];
        let mut remaining: Vec<usize> = (0..self.n).collect();
        let mut rank = rank.clone();
        let mut label = 0u32;
        while !remaining.is_empty() {
            let m = remaining.len();
            label += 1;
            let row = &self.cum[m];
            // Smallest j with rank < cum[m][j].
            let j = row.partition_point(|c| c <= &rank);
            rank -= &row[j - 1];
            let rest = self.tables.bell((m - j) as i64);
            let (mut idx, sub) = rank.div_rem(rest);
            rank = sub;
            word[remaining[0]] = label;
            let mut need = j - 1;
            let mut kept = Vec::with_capacity(m - j);
            for (c, &elem) in remaining.iter().enumerate().skip(1) {
                if need == 0 {
                    kept.push(elem);
                    continue;
                }
                let with = &self.binom[m - 1 - c][need - 1];
                if &idx < with {
                    word[elem] = label;
                    need -= 1;
                } else {
                    idx -= with;
                    kept.push(elem);
                }
            }
            remaining = kept;
        }
        Ok(SetPartition::from_rgf(&word).expect("unranking yields a restricted growth function"))
    }

    /// Inverse of [`PartitionSampler::unrank`].
    ///
    /// # Panics
    ///
    /// If the partition is not on `[n]`.
    pub fn rank(&self, p: &SetPartition) -> BigInt {
        assert_eq!(p.len(), self.n, "partition size differs from sampler size");
        let mut remaining: Vec<usize> = (0..self.n).collect();
        let word = p.rgf();
        let mut digits = Vec::new();
        while !remaining.is_empty() {
            let m = remaining.len();
            let label = word[remaining[0]];
            let members: Vec<bool> = remaining.iter().map(|&e| word[e] == label).collect();
            let j = members.iter().filter(|&&b| b).count();
            let mut idx = BigInt::zero();
            let mut need = j - 1;
            for (c, &inside) in members.iter().enumerate().skip(1) {
                if need == 0 {
                    break;
                }
                let with = &self.binom[m - 1 - c][need - 1];
                if inside {
                    need -= 1;
                } else {
                    idx += with;
                }
            }
            digits.push((m, j, idx));
            remaining.retain(|&e| word[e] != label);
        }
        let mut rank = BigInt::zero();
        for (m, j, idx) in digits.into_iter().rev() {
            rank = &self.cum[m][j - 1] + idx * self.tables.bell((m - j) as i64) + rank;
        }
        rank
    }

    pub fn sample<R: RngCore>(&self, rng: &mut R) -> SetPartition {
        let r = uniform_below(rng, self.tables.bell(self.n as i64));
        self.unrank(&r).expect("draw lies below B_n")
    }
}

/// The partition of `[n]` into `k` blocks of rank `rank` in `[0, S_{n,k})`,
/// deciding for `i = n, n-1, ..., 1` whether `i` is a singleton (ranks below
/// `S_{i-1,k-1}`) or joins one of the `k` blocks of a partition of `[i-1]`.
pub fn unrank_k(tables: &CountTables, n: usize, k: usize, rank: &BigInt) -> Result<SetPartition, SamplerError> {
    if k > n || (k == 0 && n > 0) {
        return Err(SamplerError::OutOfRange { n, k });
    }
    if rank.sign() == Sign::Minus || rank >= tables.stirling2(n as i64, k as i64) {
        return Err(SamplerError::RankOutOfRange(rank.clone()));
    }
    let mut word = vec![0u32; n];
    let mut rank = rank.clone();
    let mut blocks = k;
    for i in (1..=n).rev() {
        let single = tables.stirling2(i as i64 - 1, blocks as i64 - 1);
        if &rank < single {
            word[i - 1] = blocks as u32;
            blocks -= 1;
        } else {
            rank -= single;
            let (b, sub) = rank.div_rem(tables.stirling2(i as i64 - 1, blocks as i64));
            word[i - 1] = u32::try_from(b).expect("block index fits") + 1;
            rank = sub;
        }
    }
    Ok(SetPartition::from_rgf(&word).expect("unranking yields a restricted growth function"))
}

/// Inverse of [`unrank_k`].
pub fn rank_k(tables: &CountTables, p: &SetPartition) -> BigInt {
    let word = p.rgf();
    let mut prefix_max = Vec::with_capacity(word.len());
    let mut max = 0;
    for &w in word {
        max = max.max(w);
        prefix_max.push(max);
    }
    let mut rank = BigInt::zero();
    for i in 1..=word.len() {
        let blocks = prefix_max[i - 1] as i64;
        let fresh = i == 1 || word[i - 1] > prefix_max[i - 2];
        if !fresh {
            let single = tables.stirling2(i as i64 - 1, blocks - 1);
            let b = i64::from(word[i - 1] - 1);
            rank = single + BigInt::from(b) * tables.stirling2(i as i64 - 1, blocks) + rank;
        }
    }
    rank
}

/// One uniform partition of `[n]` from a fresh generator.
pub fn sample_partition(n: usize, seed: u64) -> SetPartition {
    PartitionSampler::new(n).sample(&mut rng_from_seed(seed))
}

/// One uniform partition of `[n]` into `k` blocks from a fresh generator.
pub fn sample_partition_k(n: usize, k: usize, seed: u64) -> Result<SetPartition, SamplerError> {
    if k == 0 || k > n {
        return Err(SamplerError::OutOfRange { n, k });
    }
    let tables = CountTables::new(n);
    let r = uniform_below(&mut rng_from_seed(seed), tables.stirling2(n as i64, k as i64));
    unrank_k(&tables, n, k, &r)
}

/// Endless stream of uniform partitions for a configuration.
pub fn sample_stream(cfg: &SamplerConfig) -> Result<impl Iterator<Item = SetPartition>, SamplerError> {
    enum Mode {
        All(PartitionSampler),
        Blocks(CountTables, usize),
    }
    let mode = match cfg.k {
        None => Mode::All(PartitionSampler::new(cfg.n)),
        Some(k) if k >= 1 && k <= cfg.n => Mode::Blocks(CountTables::new(cfg.n), k),
        Some(k) => return Err(SamplerError::OutOfRange { n: cfg.n, k }),
    };
    let mut rng = rng_from_seed(cfg.seed);
    let n = cfg.n;
    Ok(core::iter::from_fn(move || {
        Some(match &mode {
            Mode::All(s) => s.sample(&mut rng),
            Mode::Blocks(t, k) => {
                let r = uniform_below(&mut rng, t.stirling2(n as i64, *k as i64));
                unrank_k(t, n, *k, &r).expect("draw lies below S_{n,k}")
            }
        })
    }))
}

/// Monte-Carlo mean of a statistic with its standard error.
pub fn empirical_mean(stat: &StatisticId, cfg: &SamplerConfig) -> Result<EmpiricalEstimate, SamplerError> {
    if cfg.trials == 0 {
        return Err(SamplerError::NoTrials);
    }
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for (i, p) in sample_stream(cfg)?.take(cfg.trials as usize).enumerate() {
        let x = stat.evaluate(&p) as f64;
        let d = x - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (x - mean);
    }
    let t = cfg.trials as f64;
    let stderr = if cfg.trials > 1 {
        libm::sqrt(m2 / (t - 1.0)) / libm::sqrt(t)
    } else {
        0.0
    };
    Ok(EmpiricalEstimate {
        mean,
        stderr,
        trials: cfg.trials,
    })
}
