//! Statistics on a single set partition and the block-pair decomposition
//! check that defines Z-statistics.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::partitions::{enumerate_all, Edge, LabeledPartition, SetPartition};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StatError {
    #[error("invalid 2-pattern {0:?}: must be a word over {{1,2}} containing both letters")]
    InvalidPattern(String),
    #[error("unknown statistic {token:?}; known: {}", CATALOG.join(", "))]
    UnknownStatistic { token: String },
    #[error("invalid pattern partition: {0}")]
    InvalidKlazarPattern(String),
}

/// Token forms accepted by [`StatisticId::from_str`].
pub const CATALOG: [&str; 11] = [
    "los",
    "inv",
    "crol",
    "croc",
    "nest2",
    "ov",
    "emb",
    "semb",
    "occ:<pattern>",
    "klazar:<rgf>",
    "blocks",
];

/// A word over `{1, 2}` that uses both letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern2 {
    word: Vec<u8>,
}

impl Pattern2 {
    pub fn new(word: &[u8]) -> Result<Self, StatError> {
        let ok = word.iter().all(|&c| c == 1 || c == 2) && word.contains(&1) && word.contains(&2);
        if !ok {
            let text: String = word.iter().map(|c| (b'0' + c) as char).collect();
            return Err(StatError::InvalidPattern(text));
        }
        Ok(Pattern2 { word: word.to_vec() })
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// The length `r`.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first_letter(&self) -> u8 {
        self.word[0]
    }

    /// Every 2-pattern of length `r`, in lexicographic order.
    pub fn all_of_length(r: usize) -> Vec<Pattern2> {
        if !(2..32).contains(&r) {
            return Vec::new();
        }
        (0u32..1 << r)
            .filter_map(|bits| {
                let word: Vec<u8> = (0..r).rev().map(|i| 1 + ((bits >> i) & 1) as u8).collect();
                Pattern2::new(&word).ok()
            })
            .collect()
    }
}

impl fmt::Display for Pattern2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.word {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern2 {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let word: Option<Vec<u8>> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect();
        match word {
            Some(w) => Pattern2::new(&w),
            None => Err(StatError::InvalidPattern(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StatisticId {
    /// Weighted block sizes `|B_2| + 2|B_3| + ... + (k-1)|B_k|`.
    Los,
    /// Inversions of the RGF.
    Inv,
    /// Crossings among linear edges.
    Crol,
    /// Crossings among circular edges.
    Croc,
    /// Nestings of two linear arcs.
    Nest2,
    /// Overlapping block pairs.
    Ov,
    /// Embracing block pairs.
    Emb,
    /// Strongly embracing block pairs.
    StrongEmb,
    /// Occurrences of a 2-pattern in the RGF.
    Occ(Pattern2),
    /// Occurrences of a pattern partition as an induced sub-partition.
    Klazar(SetPartition),
    /// Number of blocks.
    Blocks,
}

impl StatisticId {
    /// The fixed statistics with a closed-form v-sequence, without the
    /// parametrised families.
    pub const NAMED: [StatisticId; 8] = [
        StatisticId::Los,
        StatisticId::Inv,
        StatisticId::Crol,
        StatisticId::Croc,
        StatisticId::Nest2,
        StatisticId::Ov,
        StatisticId::Emb,
        StatisticId::StrongEmb,
    ];

    /// Number of blocks summed over in the decomposition: 2 for the classical
    /// Z-statistics, the pattern's block count for Klazar occurrences and 1
    /// for the block count itself.
    pub fn depth(&self) -> usize {
        match self {
            StatisticId::Blocks => 1,
            StatisticId::Klazar(tau) => tau.block_count(),
            _ => 2,
        }
    }

    pub fn evaluate(&self, p: &SetPartition) -> u64 {
        match self {
            StatisticId::Los => los(p),
            StatisticId::Inv => inv(p),
            StatisticId::Crol => crol(p),
            StatisticId::Croc => croc(p),
            StatisticId::Nest2 => nest2(p),
            StatisticId::Ov => ov(p),
            StatisticId::Emb => emb(p),
            StatisticId::StrongEmb => strong_emb(p),
            StatisticId::Occ(sigma) => occ(p, sigma),
            StatisticId::Klazar(tau) => klazar_occ(p, tau),
            StatisticId::Blocks => p.block_count() as u64,
        }
    }
}

impl fmt::Display for StatisticId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatisticId::Los => f.write_str("los"),
            StatisticId::Inv => f.write_str("inv"),
            StatisticId::Crol => f.write_str("crol"),
            StatisticId::Croc => f.write_str("croc"),
            StatisticId::Nest2 => f.write_str("nest2"),
            StatisticId::Ov => f.write_str("ov"),
            StatisticId::Emb => f.write_str("emb"),
            StatisticId::StrongEmb => f.write_str("semb"),
            StatisticId::Occ(sigma) => write!(f, "occ:{sigma}"),
            StatisticId::Klazar(tau) => {
                f.write_str("klazar:")?;
                if tau.rgf().iter().all(|&l| l < 10) {
                    tau.rgf().iter().try_for_each(|l| write!(f, "{l}"))
                } else {
                    let parts: Vec<String> = tau.rgf().iter().map(u32::to_string).collect();
                    f.write_str(&parts.join(","))
                }
            }
            StatisticId::Blocks => f.write_str("blocks"),
        }
    }
}

impl FromStr for StatisticId {
    type Err = StatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let id = match s {
            "los" => StatisticId::Los,
            "inv" => StatisticId::Inv,
            "crol" => StatisticId::Crol,
            "croc" => StatisticId::Croc,
            "nest2" => StatisticId::Nest2,
            "ov" => StatisticId::Ov,
            "emb" => StatisticId::Emb,
            "semb" | "strong_emb" => StatisticId::StrongEmb,
            "blocks" => StatisticId::Blocks,
            _ => {
                if let Some(pat) = s.strip_prefix("occ:") {
                    StatisticId::Occ(pat.parse()?)
                } else if let Some(pat) = s.strip_prefix("klazar:") {
                    StatisticId::Klazar(parse_klazar_pattern(pat)?)
                } else {
                    return Err(StatError::UnknownStatistic { token: s.to_string() });
                }
            }
        };
        Ok(id)
    }
}

/// Compact digits (`122`), separated letters (`1,2,2`) or block form (`1/23`).
fn parse_klazar_pattern(s: &str) -> Result<SetPartition, StatError> {
    let bad = |e: crate::partitions::PartitionError| StatError::InvalidKlazarPattern(e.to_string());
    let tau = if s.contains('/') {
        let blocks = s
            .split('/')
            .filter(|b| !b.trim().is_empty())
            .map(|b| {
                let digits: Option<Vec<u64>> = if b.contains(|c: char| c.is_whitespace() || c == ',') {
                    b.split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse().ok())
                        .collect()
                } else {
                    b.chars().map(|c| c.to_digit(10).map(u64::from)).collect()
                };
                digits.ok_or_else(|| StatError::InvalidKlazarPattern(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        LabeledPartition::new(blocks).standardize().map_err(bad)?
    } else if s.contains(|c: char| c.is_whitespace() || c == ',') {
        s.parse().map_err(bad)?
    } else {
        let word: Option<Vec<u32>> = s.chars().map(|c| c.to_digit(10)).collect();
        let word = word.ok_or_else(|| StatError::InvalidKlazarPattern(s.to_string()))?;
        SetPartition::from_rgf(&word).map_err(bad)?
    };
    if tau.is_empty() {
        return Err(StatError::InvalidKlazarPattern("empty pattern".to_string()));
    }
    Ok(tau)
}

pub fn los(p: &SetPartition) -> u64 {
    p.rgf().iter().map(|&w| u64::from(w - 1)).sum()
}

pub fn inv(p: &SetPartition) -> u64 {
    let mut seen = vec![0u64; p.block_count() + 1];
    let mut total = 0;
    for &w in p.rgf() {
        total += seen[w as usize + 1..].iter().sum::<u64>();
        seen[w as usize] += 1;
    }
    total
}

fn count_pairs(edges: &[Edge], pred: impl Fn(&Edge, &Edge) -> bool) -> u64 {
    let mut total = 0;
    for (idx, a) in edges.iter().enumerate() {
        for b in &edges[idx + 1..] {
            if pred(a, b) {
                total += 1;
            }
        }
    }
    total
}

/// Edges come sorted by left endpoint, so within a pair `a.i <= b.i`.
fn crosses(a: &Edge, b: &Edge) -> bool {
    a.i < b.i && b.i < a.j && a.j < b.j
}

pub fn crol(p: &SetPartition) -> u64 {
    count_pairs(&p.linear_edges(), crosses)
}

pub fn croc(p: &SetPartition) -> u64 {
    count_pairs(&p.circular_edges(), crosses)
}

pub fn nest2(p: &SetPartition) -> u64 {
    count_pairs(&p.linear_edges(), |a, b| a.i < b.i && b.j < a.j)
}

/// `(min, max)` of every block in standard order; blocks are sorted by
/// minimum, so pair predicates only need to look forward.
fn extents(p: &SetPartition) -> Vec<(usize, usize)> {
    let mut ext = vec![(0usize, 0usize); p.block_count()];
    for (idx, &w) in p.rgf().iter().enumerate() {
        let e = &mut ext[w as usize - 1];
        if e.0 == 0 {
            e.0 = idx + 1;
        }
        e.1 = idx + 1;
    }
    ext
}

fn count_block_pairs(p: &SetPartition, pred: impl Fn((usize, usize), (usize, usize)) -> bool) -> u64 {
    let ext = extents(p);
    let mut total = 0;
    for (idx, &a) in ext.iter().enumerate() {
        for &b in &ext[idx + 1..] {
            if pred(a, b) {
                total += 1;
            }
        }
    }
    total
}

pub fn ov(p: &SetPartition) -> u64 {
    count_block_pairs(p, |a, b| b.0 < a.1 && a.1 < b.1)
}

pub fn emb(p: &SetPartition) -> u64 {
    count_block_pairs(p, |a, b| b.1 < a.1)
}

pub fn strong_emb(p: &SetPartition) -> u64 {
    count_block_pairs(p, |a, b| b.0 < b.1 && b.1 < a.1)
}

/// Number of subsequences of `word` equal to `target`.
fn subsequence_count(word: &[u32], target: &[u32]) -> u64 {
    let mut ways = vec![0u64; target.len() + 1];
    ways[0] = 1;
    for &c in word {
        for j in (0..target.len()).rev() {
            if target[j] == c {
                ways[j + 1] += ways[j];
            }
        }
    }
    ways[target.len()]
}

/// Occurrences of `sigma` in the RGF. An occurrence uses exactly two values
/// `a < b`, with `a` in the places of `1` and `b` in the places of `2`.
pub fn occ(p: &SetPartition, sigma: &Pattern2) -> u64 {
    let k = p.block_count() as u32;
    let mut target = vec![0u32; sigma.len()];
    let mut total = 0;
    for a in 1..=k {
        for b in a + 1..=k {
            for (t, &c) in target.iter_mut().zip(sigma.word()) {
                *t = if c == 1 { a } else { b };
            }
            total += subsequence_count(p.rgf(), &target);
        }
    }
    total
}

/// Number of position sets on which `p` induces `tau`. Each such set
/// determines an injection from the blocks of `tau` into the blocks of `p`,
/// and for a fixed injection the matching sets are the subsequences of the
/// RGF spelling the relabelled pattern word.
pub fn klazar_occ(p: &SetPartition, tau: &SetPartition) -> u64 {
    let b = tau.block_count();
    let k = p.block_count();
    if tau.len() > p.len() || b > k {
        return 0;
    }
    if tau.is_empty() {
        return 1;
    }
    let mut image = vec![0u32; b];
    let mut used = vec![false; k + 1];
    let mut target = vec![0u32; tau.len()];
    let mut total = 0;
    injections(0, &mut image, &mut used, &mut |img| {
        for (t, &l) in target.iter_mut().zip(tau.rgf()) {
            *t = img[l as usize - 1];
        }
        total += subsequence_count(p.rgf(), &target);
    });
    total
}

fn injections(pos: usize, image: &mut [u32], used: &mut [bool], visit: &mut impl FnMut(&[u32])) {
    if pos == image.len() {
        visit(image);
        return;
    }
    for v in 1..used.len() {
        if !used[v] {
            used[v] = true;
            image[pos] = v as u32;
            injections(pos + 1, image, used, visit);
            used[v] = false;
        }
    }
}

/// Calls `visit` with every `r`-subset of `0..k` in lexicographic order.
pub(crate) fn for_each_subset(k: usize, r: usize, mut visit: impl FnMut(&[usize])) {
    if r > k {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + k - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `Σ stat(st(B_{i_1} ∪ ... ∪ B_{i_r}))` over all `r`-subsets of blocks.
pub fn block_subset_sum(stat: &StatisticId, p: &SetPartition, r: usize) -> u64 {
    let blocks = p.blocks();
    let mut total = 0;
    for_each_subset(blocks.len(), r, |chosen| {
        let positions: Vec<usize> = chosen.iter().flat_map(|&b| blocks[b].iter().copied()).collect();
        total += stat.evaluate(&p.induced(&positions));
    });
    total
}

/// The first partition of `[n]` on which `stat` differs from the sum of its
/// values over standardized `depth`-subsets of blocks.
pub fn z_counterexample(stat: &StatisticId, n: usize, depth: usize) -> Option<(SetPartition, u64, u64)> {
    enumerate_all(n).find_map(|p| {
        let direct = stat.evaluate(&p);
        let summed = block_subset_sum(stat, &p, depth);
        (direct != summed).then_some((p, direct, summed))
    })
}

/// True iff on every partition of `[n]` the statistic equals the sum of its
/// values over standardized block pairs.
pub fn verify_z_property(stat: &StatisticId, n: usize) -> bool {
    z_counterexample(stat, n, 2).is_none()
}

/// Like [`verify_z_property`] for subsets of `depth` blocks.
pub fn verify_z_property_depth(stat: &StatisticId, n: usize, depth: usize) -> bool {
    z_counterexample(stat, n, depth).is_none()
}

/// Human-readable description of a counterexample.
pub fn describe_counterexample(stat: &StatisticId, found: &(SetPartition, u64, u64)) -> String {
    format!(
        "{stat} on {} is {} but the block decomposition gives {}",
        found.0.block_form(),
        found.1,
        found.2
    )
}
