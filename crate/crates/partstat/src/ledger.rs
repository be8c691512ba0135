//! The verification ledger: every cross-check the library supports, run
//! against exhaustive enumeration and reported one line per check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use partstat_core::closedforms::{self, closed_mean, FormulaVariant};
use partstat_core::exactnum::{self, CountTables, QPolynomial};
use partstat_core::partitions::{enumerate_all, enumerate_k, enumerate_regular};
use partstat_core::sampler::{self, SamplerConfig};
use partstat_core::statistics::{self, Pattern2};
use partstat_core::zmean::{self, VSequence};
use partstat_core::{SetPartition, StatisticId};
use rayon::prelude::*;

use crate::render::rat_string;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, failures: Vec<String>, ok_detail: impl Into<String>) -> Self {
        let passed = failures.is_empty();
        Check {
            name: name.into(),
            passed,
            detail: if passed { ok_detail.into() } else { failures.join("; ") },
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {}: {}", self.name, self.detail)
    }
}

fn stat(token: &str) -> StatisticId {
    token.parse().expect("catalog token")
}

/// Statistics covered by the oracle triangle.
pub fn triangle_statistics() -> Vec<StatisticId> {
    let mut out: Vec<StatisticId> = StatisticId::NAMED.to_vec();
    for r in 2..=4 {
        out.extend(Pattern2::all_of_length(r).into_iter().map(StatisticId::Occ));
    }
    out.push(StatisticId::Blocks);
    out
}

/// Totals per block count over `Π_n`, index `k`.
fn totals_by_k(stat: &StatisticId, n: usize) -> Vec<(u64, u64)> {
    let mut acc = vec![(0u64, 0u64); n + 1];
    for p in enumerate_all(n) {
        let slot = &mut acc[p.block_count()];
        slot.0 += stat.evaluate(&p);
        slot.1 += 1;
    }
    acc
}

fn frac(total: u64, count: u64) -> BigRational {
    BigRational::new(total.into(), count.into())
}

fn counting(max_n: usize) -> Check {
    let t = CountTables::new(max_n);
    let mut failures = Vec::new();
    for n in 0..=max_n {
        let mut by_k = vec![0u64; n + 1];
        for p in enumerate_all(n) {
            by_k[p.block_count()] += 1;
        }
        let total: u64 = by_k.iter().sum();
        if BigInt::from(total) != *t.bell(n as i64) {
            failures.push(format!("bell({n})"));
        }
        for (k, &c) in by_k.iter().enumerate() {
            let s = t.stirling2(n as i64, k as i64);
            if BigInt::from(c) != *s || exactnum::stirling2_summation(n as u32, k as u32) != *s {
                failures.push(format!("stirling2({n},{k})"));
            }
        }
    }
    Check::new("counting", failures, format!("Bell and Stirling numbers match enumeration for n <= {max_n}"))
}

fn z_property(s: StatisticId, max_n: usize) -> Check {
    let depth = s.depth();
    let found = (0..=max_n).find_map(|n| statistics::z_counterexample(&s, n, depth));
    let failures = found
        .iter()
        .map(|c| statistics::describe_counterexample(&s, c))
        .collect();
    Check::new(
        format!("z-property {s}"),
        failures,
        format!("block decomposition of depth {depth} holds for n <= {max_n}"),
    )
}

fn triangle(s: StatisticId, max_n: usize) -> Check {
    let t = CountTables::new(max_n + 2);
    let v = VSequence::closed(&s, max_n).expect("triangle statistics have closed v-sequences");
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let by_k = totals_by_k(&s, n);
        let total: u64 = by_k.iter().map(|x| x.0).sum();
        let count: u64 = by_k.iter().map(|x| x.1).sum();
        let brute = frac(total, count);
        let engine = zmean::mean_n_engine(&v, &t, n).expect("tables cover n").mean;
        let closed = closed_mean(&s, &t, n, None, FormulaVariant::Canonical).ok();
        if engine != brute || closed.as_ref().is_some_and(|c| c != &brute) {
            failures.push(format!("n={n}"));
        }
        for (k, &(tot, cnt)) in by_k.iter().enumerate().skip(1) {
            let brute = frac(tot, cnt);
            let engine = zmean::mean_nk_engine(&v, &t, n, k).expect("k in range").mean;
            let closed = closed_mean(&s, &t, n, Some(k), FormulaVariant::Canonical).ok();
            if engine != brute || closed.as_ref().is_some_and(|c| c != &brute) {
                failures.push(format!("n={n} k={k}"));
            }
        }
    }
    Check::new(
        format!("triangle {s}"),
        failures,
        format!("closed = engine = brute force for n <= {max_n}, all k"),
    )
}

fn connecting_relations() -> Check {
    let t = CountTables::new(42);
    let mut failures = Vec::new();
    for r in 2..=6 {
        for n in 0..=40 {
            let sum = closedforms::mean_occ_first(&t, n, r, 1).unwrap() + closedforms::mean_occ_first(&t, n, r, 2).unwrap();
            if sum != closedforms::occ_connecting_sum(&t, n, r).unwrap() {
                failures.push(format!("r={r} n={n}"));
            }
            for k in 1..=n {
                let sum = closedforms::mean_occ_first_k(&t, n, k, r, 1).unwrap()
                    + closedforms::mean_occ_first_k(&t, n, k, r, 2).unwrap();
                if sum != closedforms::occ_connecting_sum_k(&t, n, k, r).unwrap() {
                    failures.push(format!("r={r} n={n} k={k}"));
                }
            }
        }
    }
    Check::new("connecting relations", failures, "r <= 6, n <= 40, all k")
}

fn explicit_patterns() -> Check {
    let t = CountTables::new(42);
    let mut failures = Vec::new();
    for r in 2..=3 {
        for sigma in Pattern2::all_of_length(r) {
            for n in 0..=40 {
                let general = closedforms::mean_occ_first(&t, n, r, sigma.first_letter()).unwrap();
                if closedforms::mean_occ_explicit(&t, n, &sigma).unwrap() != general {
                    failures.push(format!("{sigma} n={n}"));
                }
            }
        }
    }
    Check::new("explicit pattern formulas", failures, "length 2 and 3 displays agree for n <= 40")
}

fn first_letter_invariance(max_n: usize) -> Check {
    let mut failures = Vec::new();
    for r in 2..=4 {
        let patterns = Pattern2::all_of_length(r);
        for n in 0..=max_n {
            let mut sums: Vec<(u8, Vec<u64>)> = Vec::new();
            for sigma in &patterns {
                let s = StatisticId::Occ(sigma.clone());
                sums.push((sigma.first_letter(), totals_by_k(&s, n).into_iter().map(|x| x.0).collect()));
            }
            for first in [1u8, 2] {
                let mut group = sums.iter().filter(|(f, _)| *f == first).map(|(_, v)| v);
                if let Some(head) = group.next() {
                    if group.any(|v| v != head) {
                        failures.push(format!("r={r} n={n} first={first}"));
                    }
                }
            }
        }
    }
    Check::new("first-letter invariance", failures, format!("r <= 4, n <= {max_n}, every k"))
}

/// Sorted values of a statistic on each `Π_n^k`.
fn distribution(stat: &StatisticId, n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); n + 1];
    for p in enumerate_all(n) {
        out[p.block_count()].push(stat.evaluate(&p));
    }
    out.iter_mut().for_each(|v| v.sort_unstable());
    out
}

fn equidistribution(a: &str, b: &str, max_n: usize) -> Check {
    let (sa, sb) = (stat(a), stat(b));
    let failures = (0..=max_n)
        .filter(|&n| distribution(&sa, n) != distribution(&sb, n))
        .map(|n| format!("n={n}"))
        .collect();
    Check::new(format!("equidistribution {a}/{b}"), failures, format!("same distribution on every Π_n^k, n <= {max_n}"))
}

fn brute_mean(s: &StatisticId, n: usize, k: Option<usize>) -> BigRational {
    zmean::brute_mean(s, n, k).expect("nonempty family").mean
}

/// Both printed forms at a witness, against enumeration.
fn erratum(name: &str, s: &StatisticId, n: usize, k: Option<usize>) -> Check {
    let t = CountTables::new(n + 2);
    let brute = brute_mean(s, n, k);
    let derivation = closed_mean(s, &t, n, k, FormulaVariant::Derivation).expect("in range");
    let theorem = closed_mean(s, &t, n, k, FormulaVariant::Theorem).expect("in range");
    let at = match k {
        Some(k) => format!("n={n} k={k}"),
        None => format!("n={n}"),
    };
    let detail = format!(
        "{at}: brute {}, derivation form {} ({}), theorem form {} ({})",
        rat_string(&brute),
        rat_string(&derivation),
        if derivation == brute { "match" } else { "mismatch" },
        rat_string(&theorem),
        if theorem == brute { "match" } else { "mismatch" },
    );
    Check {
        name: format!("erratum {name}"),
        passed: derivation == brute && theorem != brute,
        detail,
    }
}

fn regular_families() -> Check {
    let mut failures = Vec::new();
    let mut covered = 0;
    for m in 1..=10usize {
        for k in 0..=10 / m {
            let ps: Vec<SetPartition> = enumerate_regular(m, k).collect();
            let lin: u64 = ps.iter().map(statistics::crol).sum();
            if closedforms::regular_linear_mean(m, k).unwrap() != frac(lin, ps.len() as u64) {
                failures.push(format!("linear m={m} k={k}"));
            }
            covered += 1;
        }
    }
    for (m, k) in [(3, 2), (3, 3)] {
        let ps: Vec<SetPartition> = enumerate_regular(m, k).collect();
        let circ: u64 = ps.iter().map(statistics::croc).sum();
        let exact = frac(circ, ps.len() as u64);
        if closedforms::regular_circular_mean(m, k).unwrap() != exact {
            failures.push(format!("circular m={m} k={k}: brute {}", rat_string(&exact)));
        }
    }
    Check::new(
        "regular families",
        failures,
        format!("linear formula on {covered} shapes with mk <= 10; circular at (3,2) and (3,3)"),
    )
}

/// Every pattern partition of `[r]` with exactly two blocks, `2 <= r <= 4`.
pub fn two_block_patterns() -> Vec<SetPartition> {
    (2..=4).flat_map(|r| enumerate_k(r, 2)).collect()
}

fn klazar_paths(max_n: usize) -> Check {
    let t = CountTables::new(max_n + 2);
    let mut failures = Vec::new();
    for tau in two_block_patterns() {
        let s = StatisticId::Klazar(tau.clone());
        let v = zmean::vr_enumerated(&s, 2, max_n);
        for n in tau.len()..=max_n {
            let direct = brute_mean(&s, n, None);
            let engine = zmean::mean_n_engine(&v, &t, n).unwrap().mean;
            let closed = closedforms::mean_klazar(&t, n, tau.len()).unwrap();
            if direct != engine || direct != closed {
                failures.push(format!("{} n={n}", tau.block_form()));
            }
        }
    }
    Check::new("klazar three paths", failures, format!("two-block patterns of [r], r <= 4, n <= {max_n}"))
}

fn q_stirling(max_n: usize) -> Check {
    let t = CountTables::new(max_n + 2);
    let rows = exactnum::q_stirling_rows(max_n);
    let mut failures = Vec::new();
    for (n, row) in rows.iter().enumerate() {
        for (k, expected) in row.iter().enumerate() {
            let mut coeffs = vec![BigInt::zero(); n * n + 1];
            for p in enumerate_k(n, k) {
                coeffs[statistics::los(&p) as usize] += 1;
            }
            let poly = QPolynomial::from_coeffs(coeffs);
            if poly != *expected {
                failures.push(format!("n={n} k={k}"));
            }
            if k >= 1 {
                let s = t.stirling2(n as i64, k as i64).clone();
                let via_q = BigRational::new(poly.derivative_at_one(), s);
                if via_q != closedforms::mean_los_k(&t, n, k).unwrap() {
                    failures.push(format!("derivative n={n} k={k}"));
                }
            }
        }
    }
    Check::new("q-stirling", failures, format!("los distribution and derivative at 1 for n <= {max_n}"))
}

fn sampler_checks() -> Check {
    let t = CountTables::new(30);
    let mut failures = Vec::new();
    for m in 1..=30 {
        let total: BigRational = sampler::branch_probabilities(&t, m).into_iter().sum();
        if !total.is_one() {
            failures.push(format!("branch probabilities m={m}"));
        }
    }
    let cfg = SamplerConfig {
        n: 10,
        k: None,
        seed: 2024,
        trials: 20_000,
    };
    let est = sampler::empirical_mean(&StatisticId::Los, &cfg).expect("valid config");
    let exact = exactnum::rat_to_f64(&closedforms::mean_los(&CountTables::new(12), 10).unwrap());
    if (est.mean - exact).abs() > 5.0 * est.stderr {
        failures.push(format!("los n=10 sampled {} vs exact {exact}", est.mean));
    }
    Check::new("sampler", failures, "branch probabilities sum to 1; sampled los mean within 5 stderr")
}

/// Run every check; output order is fixed regardless of scheduling.
pub fn run_ledger(max_n: usize) -> Vec<Check> {
    let small = max_n.min(7);
    let mut jobs: Vec<Box<dyn Fn() -> Check + Send + Sync>> = vec![Box::new(move || counting(max_n))];
    let mut z_stats: Vec<StatisticId> = StatisticId::NAMED.to_vec();
    for r in 2..=3 {
        z_stats.extend(Pattern2::all_of_length(r).into_iter().map(StatisticId::Occ));
    }
    z_stats.extend([stat("klazar:12"), stat("klazar:1/23"), StatisticId::Blocks]);
    for s in z_stats {
        jobs.push(Box::new(move || z_property(s.clone(), small)));
    }
    for s in triangle_statistics() {
        jobs.push(Box::new(move || triangle(s.clone(), max_n)));
    }
    jobs.push(Box::new(connecting_relations));
    jobs.push(Box::new(explicit_patterns));
    jobs.push(Box::new(move || first_letter_invariance(max_n)));
    jobs.push(Box::new(move || equidistribution("crol", "nest2", max_n)));
    jobs.push(Box::new(move || equidistribution("ov", "semb", max_n)));
    jobs.push(Box::new(|| erratum("croc mean", &StatisticId::Croc, 4, None)));
    jobs.push(Box::new(|| erratum("croc block mean", &StatisticId::Croc, 5, Some(3))));
    jobs.push(Box::new(|| erratum("ov block mean", &StatisticId::Ov, 4, Some(2))));
    jobs.push(Box::new(regular_families));
    jobs.push(Box::new(move || klazar_paths(max_n.min(8))));
    jobs.push(Box::new(move || q_stirling(max_n.min(10))));
    jobs.push(Box::new(sampler_checks));
    jobs.par_iter().map(|job| job()).collect()
}
