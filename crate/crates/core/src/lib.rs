//! Exact mean values of statistics on set partitions.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`] holds the arbitrary-precision counting layer: Bell and
//!   Stirling tables, binomials, falling factorials and Carlitz's q-Stirling
//!   polynomials.
//! * [`partitions`] stores a set partition as its restricted growth function
//!   and enumerates `Π_n`, `Π_n^k` and the `m`-regular families lazily.
//! * [`statistics`] evaluates every statistic on a single partition and checks
//!   the block-pair decomposition property of Z-statistics.
//! * [`zmean`] is the generic mean engine: given the totals of a statistic over
//!   the partitions with exactly `depth` blocks, it produces the totals and
//!   means over every `Π_n^k` by an exact binomial–Stirling convolution.
//! * [`closedforms`] evaluates the known closed formulas, including both
//!   printed variants where they disagree.
//! * [`asymptotics`] evaluates leading-order approximations in binary64.
//! * [`sampler`] draws uniformly random partitions by exact unranking.
//!
//! Everything except [`asymptotics`] and the float renderings in reports is
//! exact. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod closedforms;
pub mod exactnum;
pub mod partitions;
pub mod sampler;
pub mod statistics;
pub mod zmean;

pub use exactnum::{CountTables, ExactInt, ExactRat, QPolynomial};
pub use partitions::{Edge, LabeledPartition, PartitionError, SetPartition};
pub use statistics::{Pattern2, StatError, StatisticId};
pub use zmean::{MeanReport, OracleVerdict, VSequence};
