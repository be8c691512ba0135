//! Set partitions of `[n]` stored as restricted growth functions.
//!
//! A partition `B_1/B_2/.../B_k` in standard form (blocks ordered by their
//! minima) corresponds to the word `w_1 ... w_n` with `w_i = j` iff `i ∈ B_j`.
//! The word is the canonical storage; block lists and edge lists are derived
//! on demand.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("invalid restricted growth function: letter {letter} at position {position}")]
    InvalidRgf { position: usize, letter: u32 },
    #[error("blocks overlap on label {label}")]
    OverlappingBlocks { label: u64 },
    #[error("empty block")]
    EmptyBlock,
    #[error("cannot parse partition: {0}")]
    Parse(String),
}

/// A set partition of `[n]`, `n >= 0`, as its restricted growth function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgf: Vec<u32>,
    blocks: u32,
}

/// A pair `i < j` of positions joined by an arc or chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
}

impl SetPartition {
    /// The unique partition of the empty set.
    pub fn empty() -> Self {
        SetPartition {
            rgf: Vec::new(),
            blocks: 0,
        }
    }

    pub fn from_rgf(word: &[u32]) -> Result<Self, PartitionError> {
        let mut max = 0u32;
        for (idx, &letter) in word.iter().enumerate() {
            if letter < 1 || letter > max + 1 {
                return Err(PartitionError::InvalidRgf {
                    position: idx + 1,
                    letter,
                });
            }
            max = max.max(letter);
        }
        Ok(SetPartition {
            rgf: word.to_vec(),
            blocks: max,
        })
    }

    /// Build from blocks of positions in `[n]`, in any order. Fails if the
    /// blocks do not partition `{1..n}` exactly.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let lp = LabeledPartition::new(
            blocks
                .iter()
                .map(|b| b.iter().map(|&x| x as u64).collect())
                .collect(),
        );
        let p = lp.standardize()?;
        let covered = lp
            .blocks()
            .iter()
            .flatten()
            .all(|&x| x >= 1 && x as usize <= n);
        if !covered {
            return Err(PartitionError::Parse(
                "blocks do not cover 1..n exactly".to_string(),
            ));
        }
        Ok(p)
    }

    pub fn rgf(&self) -> &[u32] {
        &self.rgf
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.rgf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgf.is_empty()
    }

    /// Number of blocks `k`.
    pub fn block_count(&self) -> usize {
        self.blocks as usize
    }

    /// Blocks in standard form: ordered by minima, each ascending, 1-based.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (idx, &letter) in self.rgf.iter().enumerate() {
            out[letter as usize - 1].push(idx + 1);
        }
        out
    }

    /// Sizes `|B_1|, ..., |B_k|` in standard order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.block_count()];
        for &letter in &self.rgf {
            sizes[letter as usize - 1] += 1;
        }
        sizes
    }

    /// Pairs of consecutive elements of each block, sorted.
    pub fn linear_edges(&self) -> Vec<Edge> {
        let mut last = vec![0usize; self.block_count()];
        let mut edges = Vec::new();
        for (idx, &letter) in self.rgf.iter().enumerate() {
            let slot = &mut last[letter as usize - 1];
            if *slot != 0 {
                edges.push(Edge { i: *slot, j: idx + 1 });
            }
            *slot = idx + 1;
        }
        edges.sort_unstable();
        edges
    }

    /// Linear edges plus the `(min, max)` chord of every block, as a set: a
    /// two-element block contributes a single chord and a singleton none.
    pub fn circular_edges(&self) -> Vec<Edge> {
        let mut edges = Vec::new();
        for block in self.blocks() {
            edges.extend(block.windows(2).map(|w| Edge { i: w[0], j: w[1] }));
            if block.len() >= 3 {
                edges.push(Edge {
                    i: block[0],
                    j: block[block.len() - 1],
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// The partition induced on a set of positions and standardized. Duplicate
    /// positions are ignored.
    ///
    /// # Panics
    ///
    /// If a position lies outside `1..=n`.
    pub fn induced(&self, positions: &[usize]) -> SetPartition {
        let mut t = positions.to_vec();
        t.sort_unstable();
        t.dedup();
        let word: Vec<u32> = t
            .iter()
            .map(|&p| {
                assert!(p >= 1 && p <= self.len(), "position {p} outside 1..={}", self.len());
                self.rgf[p - 1]
            })
            .collect();
        relabel_by_first_occurrence(&word)
    }

    /// Block form such as `1 4 7/2/3 9/5/6 8`.
    pub fn block_form(&self) -> String {
        let mut s = String::new();
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                s.push('/');
            }
            for (idx, x) in block.iter().enumerate() {
                if idx > 0 {
                    s.push(' ');
                }
                s.push_str(&x.to_string());
            }
        }
        s
    }
}

/// Standardize an arbitrary word by renaming letters in order of first
/// appearance; the result is always a valid RGF.
pub(crate) fn relabel_by_first_occurrence(word: &[u32]) -> SetPartition {
    let mut names: Vec<(u32, u32)> = Vec::new();
    let mut rgf = Vec::with_capacity(word.len());
    for &letter in word {
        let name = match names.iter().find(|(l, _)| *l == letter) {
            Some(&(_, name)) => name,
            None => {
                let name = names.len() as u32 + 1;
                names.push((letter, name));
                name
            }
        };
        rgf.push(name);
    }
    SetPartition {
        rgf,
        blocks: names.len() as u32,
    }
}

impl fmt::Display for SetPartition {
    /// Space-separated RGF letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, letter) in self.rgf.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl FromStr for SetPartition {
    type Err = PartitionError;

    /// Accepts an RGF (`1 2 3 1 4`) or, when the text contains `/`, a block
    /// form (`1 4/2 5/3`) whose labels are standardized. A single block in
    /// block form needs a trailing slash: `1 2 3/`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_list = |piece: &str| -> Result<Vec<u64>, PartitionError> {
            piece
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| PartitionError::Parse(alloc::format!("bad number {t:?}")))
                })
                .collect()
        };
        if s.contains('/') {
            let blocks = s
                .split('/')
                .filter(|piece| !piece.trim().is_empty())
                .map(parse_list)
                .collect::<Result<Vec<_>, _>>()?;
            LabeledPartition::new(blocks).standardize()
        } else {
            let word = parse_list(s)?
                .into_iter()
                .map(|x| {
                    u32::try_from(x).map_err(|_| PartitionError::Parse(alloc::format!("letter {x} too large")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            SetPartition::from_rgf(&word)
        }
    }
}

/// Disjoint nonempty blocks of arbitrary positive labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPartition {
    blocks: Vec<Vec<u64>>,
}

impl LabeledPartition {
    pub fn new(blocks: Vec<Vec<u64>>) -> Self {
        LabeledPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    /// Relabel the union order-preservingly onto `[n]` and return the
    /// resulting partition in standard form.
    pub fn standardize(&self) -> Result<SetPartition, PartitionError> {
        let mut labelled: Vec<(u64, u32)> = Vec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            labelled.extend(block.iter().map(|&x| (x, b as u32)));
        }
        labelled.sort_unstable();
        if let Some(w) = labelled.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PartitionError::OverlappingBlocks { label: w[0].0 });
        }
        let word: Vec<u32> = labelled.iter().map(|&(_, b)| b).collect();
        Ok(relabel_by_first_occurrence(&word))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    All,
    Blocks(usize),
    Regular { m: usize, k: usize },
}

/// Lazy lexicographic generator of restricted growth functions.
///
/// Memory is `O(n)` regardless of how many partitions are produced.
#[derive(Clone, Debug)]
pub struct RgfIter {
    shape: Shape,
    n: usize,
    word: Vec<u32>,
    /// `maxes[i]` is the largest letter among `word[..=i]`.
    maxes: Vec<u32>,
    counts: Vec<usize>,
    fixed: usize,
    started: bool,
    done: bool,
}

impl RgfIter {
    fn new(shape: Shape, n: usize) -> Self {
        let blocks = match shape {
            Shape::All => n,
            Shape::Blocks(k) | Shape::Regular { k, .. } => k,
        };
        RgfIter {
            shape,
            n,
            word: Vec::with_capacity(n),
            maxes: Vec::with_capacity(n),
            counts: vec![0; blocks + 2],
            fixed: 0,
            started: false,
            done: false,
        }
    }

    /// Restrict the stream to words starting with `prefix`. Streams with
    /// distinct prefixes of equal length are disjoint, which is how a range
    /// can be split across threads.
    pub fn with_prefix(mut self, prefix: &[u32]) -> Self {
        if prefix.len() > self.n {
            self.done = true;
            return self;
        }
        for &letter in prefix {
            if !self.allowed(letter) {
                self.done = true;
                return self;
            }
            self.push(letter);
        }
        self.fixed = prefix.len();
        self
    }

    fn current_max(&self) -> u32 {
        self.maxes.last().copied().unwrap_or(0)
    }

    fn allowed(&self, letter: u32) -> bool {
        let pos = self.word.len();
        let max = self.current_max();
        if letter < 1 || letter > max + 1 {
            return false;
        }
        let new_max = max.max(letter) as usize;
        match self.shape {
            Shape::All => true,
            Shape::Blocks(k) => new_max <= k && new_max + (self.n - pos - 1) >= k,
            Shape::Regular { m, k } => new_max <= k && self.counts[letter as usize] < m,
        }
    }

    fn push(&mut self, letter: u32) {
        let max = self.current_max().max(letter);
        self.word.push(letter);
        self.maxes.push(max);
        self.counts[letter as usize] += 1;
    }

    fn pop(&mut self) -> Option<u32> {
        let letter = self.word.pop()?;
        self.maxes.pop();
        self.counts[letter as usize] -= 1;
        Some(letter)
    }

    /// Complete the word with the lexicographically smallest feasible suffix.
    fn fill(&mut self) -> bool {
        while self.word.len() < self.n {
            let top = self.current_max() + 1;
            match (1..=top).find(|&l| self.allowed(l)) {
                Some(l) => self.push(l),
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        while self.word.len() > self.fixed {
            let old = self.pop().expect("word longer than prefix");
            let top = self.current_max() + 1;
            if let Some(l) = (old + 1..=top).find(|&l| self.allowed(l)) {
                self.push(l);
                if self.fill() {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for RgfIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            self.advance()
        } else {
            self.started = true;
            let shape_ok = match self.shape {
                Shape::All => true,
                Shape::Blocks(k) => k <= self.n && (k > 0 || self.n == 0),
                Shape::Regular { .. } => true,
            };
            shape_ok && self.fill()
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(SetPartition {
            rgf: self.word.clone(),
            blocks: self.current_max(),
        })
    }
}

/// Every partition of `[n]` once, in lexicographic RGF order.
pub fn enumerate_all(n: usize) -> RgfIter {
    RgfIter::new(Shape::All, n)
}

/// Every partition of `[n]` into exactly `k` blocks.
pub fn enumerate_k(n: usize, k: usize) -> RgfIter {
    RgfIter::new(Shape::Blocks(k), n)
}

/// Every partition of `[m k]` into `k` blocks of size `m`.
///
/// # Panics
///
/// If `m == 0`.
pub fn enumerate_regular(m: usize, k: usize) -> RgfIter {
    assert!(m >= 1, "block size must be positive");
    RgfIter::new(Shape::Regular { m, k }, m * k)
}
