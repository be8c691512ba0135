//! Command-line surface. [`run`] parses arguments and writes to the given
//! streams so the binary and the tests share one code path.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use partstat_core::asymptotics;
use partstat_core::closedforms::{self, ClosedError, FormulaVariant};
use partstat_core::exactnum::CountTables;
use partstat_core::partitions::{enumerate_all, enumerate_k, enumerate_regular};
use partstat_core::sampler::{self, SamplerConfig};
use partstat_core::zmean::{self, MeanReport, VSequence};
use partstat_core::{SetPartition, StatisticId};
use serde::Serialize;
use thiserror::Error;

use crate::ledger;
use crate::render::{self, rat_string, EstimateJson, MeanJson};

/// Largest `n` for which brute force is attempted.
pub const BRUTE_MAX_N: usize = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "partstat", version, about = "Exact statistics on set partitions")]
pub struct Cli {
    /// Largest n any verb accepts.
    #[arg(long, global = true, env = "PARTSTAT_TABLE_N", default_value_t = 1000)]
    pub table_n: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Engine,
    Brute,
    Sampled,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Canonical,
    Theorem,
    Derivation,
}

impl From<Variant> for FormulaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Canonical => FormulaVariant::Canonical,
            Variant::Theorem => FormulaVariant::Theorem,
            Variant::Derivation => FormulaVariant::Derivation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Bell,
    Stirling,
    V,
}

fn parse_stat(s: &str) -> std::result::Result<StatisticId, String> {
    s.parse().map_err(|e: partstat_core::StatError| e.to_string())
}

fn parse_partition(s: &str) -> std::result::Result<SetPartition, String> {
    s.parse().map_err(|e: partstat_core::PartitionError| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List partitions of [n] as restricted growth functions.
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, conflicts_with = "regular")]
        k: Option<usize>,
        /// Only partitions whose blocks all have this size.
        #[arg(long, requires = "blocks_count")]
        regular: Option<usize>,
        /// Block count for `--regular`.
        #[arg(long = "count", id = "blocks_count")]
        count: Option<usize>,
        /// Print block form instead of the word.
        #[arg(long)]
        blocks: bool,
    },
    /// Evaluate a statistic on one partition.
    Stat {
        #[arg(long, value_parser = parse_stat)]
        stat: StatisticId,
        #[arg(long, value_parser = parse_partition)]
        partition: SetPartition,
    },
    /// Mean over Π_n or Π_n^k by one or more methods.
    Mean(MeanArgs),
    /// Run the verification ledger.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Print the formula catalog as JSON instead.
        #[arg(long)]
        catalog: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact means against their approximations, as CSV.
    Asymptotics {
        #[arg(long, value_parser = parse_stat)]
        stat: StatisticId,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        grid: Vec<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Variant::Canonical)]
        variant: Variant,
    },
    /// Draw uniform partitions, or estimate a mean when `--stat` is given.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, value_parser = parse_stat)]
        stat: Option<StatisticId>,
    },
    /// Exact tables as CSV.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long)]
        n: usize,
        /// Statistic for `--kind v`.
        #[arg(long, value_parser = parse_stat)]
        stat: Option<StatisticId>,
    },
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long, value_parser = parse_stat)]
    pub stat: StatisticId,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Variant::Canonical)]
    pub variant: Variant,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification mismatch")]
    Mismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parse `args` (program name first) and execute. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(CliError::Mismatch) => EXIT_MISMATCH,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn check_n(cli: &Cli, n: usize) -> Result<()> {
    if n > cli.table_n {
        return Err(usage(format!("n={n} exceeds the table limit {} (set --table-n)", cli.table_n)));
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Enumerate {
            n,
            k,
            regular,
            count,
            blocks,
        } => {
            let items: Box<dyn Iterator<Item = SetPartition>> = match (regular, n) {
                (Some(m), _) => {
                    let c = count.expect("clap enforces --count");
                    check_n(cli, m * c)?;
                    Box::new(enumerate_regular(*m, c))
                }
                (None, Some(n)) => {
                    check_n(cli, *n)?;
                    match k {
                        Some(k) => Box::new(enumerate_k(*n, *k)),
                        None => Box::new(enumerate_all(*n)),
                    }
                }
                (None, None) => return Err(usage("enumerate needs --n or --regular with --count")),
            };
            for p in items {
                if *blocks {
                    writeln!(out, "{}", p.block_form())?;
                } else {
                    writeln!(out, "{p}")?;
                }
            }
        }
        Command::Stat { stat, partition } => {
            writeln!(out, "{}", stat.evaluate(partition))?;
        }
        Command::Mean(args) => mean(cli, args, out, err)?,
        Command::Verify { max_n, catalog, format } => {
            if *catalog {
                writeln!(out, "{}", render::catalog_json(&closedforms::catalog()))?;
                return Ok(());
            }
            if *max_n > BRUTE_MAX_N {
                return Err(usage(format!("--max-n is limited to {BRUTE_MAX_N}")));
            }
            let checks = ledger::run_ledger(*max_n);
            if *format == Format::Json {
                let rows: Vec<CheckJson> = checks.iter().map(CheckJson::from).collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("checks serialize"))?;
            } else {
                for c in &checks {
                    writeln!(out, "{c}")?;
                }
            }
            let failed: Vec<&ledger::Check> = checks.iter().filter(|c| !c.passed).collect();
            if !failed.is_empty() {
                for c in failed {
                    writeln!(err, "MISMATCH {}: {}", c.name, c.detail)?;
                }
                return Err(CliError::Mismatch);
            }
        }
        Command::Asymptotics { stat, grid, k, variant } => {
            let top = grid.iter().copied().max().ok_or_else(|| usage("empty grid"))?;
            check_n(cli, top)?;
            let tables = CountTables::new(top + 2);
            let csv = match k {
                Some(k) => render::block_convergence_csv(
                    &asymptotics::convergence_report_k(stat, &tables, *k, grid).map_err(usage)?,
                ),
                None => render::convergence_csv(
                    &asymptotics::convergence_report(stat, &tables, grid, (*variant).into()).map_err(usage)?,
                ),
            };
            out.write_all(csv.as_bytes())?;
        }
        Command::Sample {
            n,
            k,
            seed,
            trials,
            stat,
        } => {
            check_n(cli, *n)?;
            let cfg = SamplerConfig {
                n: *n,
                k: *k,
                seed: *seed,
                trials: *trials,
            };
            match stat {
                Some(stat) => {
                    let est = sampler::empirical_mean(stat, &cfg).map_err(usage)?;
                    let json = serde_json::to_string(&EstimateJson::from(&est)).expect("estimate serializes");
                    writeln!(out, "{json}")?;
                }
                None => {
                    for p in sampler::sample_stream(&cfg).map_err(usage)?.take(*trials as usize) {
                        writeln!(out, "{p}")?;
                    }
                }
            }
        }
        Command::Table { kind, n, stat } => {
            check_n(cli, *n)?;
            let t = CountTables::new(*n);
            match kind {
                TableKind::Bell => {
                    writeln!(out, "n,bell")?;
                    for i in 0..=*n {
                        writeln!(out, "{i},{}", t.bell(i as i64))?;
                    }
                }
                TableKind::Stirling => {
                    writeln!(out, "n,k,stirling2")?;
                    for i in 0..=*n {
                        for (k, s) in t.stirling_row(i).iter().enumerate() {
                            writeln!(out, "{i},{k},{s}")?;
                        }
                    }
                }
                TableKind::V => {
                    let stat = stat.as_ref().ok_or_else(|| usage("--kind v needs --stat"))?;
                    let v = VSequence::closed(stat, *n).map_err(usage)?;
                    writeln!(out, "m,v")?;
                    for (m, x) in v.values.iter().enumerate() {
                        writeln!(out, "{m},{x}")?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

impl<'a> From<&'a ledger::Check> for CheckJson<'a> {
    fn from(c: &'a ledger::Check) -> Self {
        CheckJson {
            name: &c.name,
            passed: c.passed,
            detail: &c.detail,
        }
    }
}

#[derive(Serialize)]
struct MeanOutput {
    stat: String,
    n: usize,
    k: Option<usize>,
    variant: &'static str,
    closed: Option<MeanJson>,
    engine: Option<MeanJson>,
    brute: Option<MeanJson>,
    sampled: Option<EstimateJson>,
    verdict: Option<&'static str>,
}

fn family_size(t: &CountTables, n: usize, k: Option<usize>) -> num_bigint::BigInt {
    match k {
        Some(k) => t.stirling2(n as i64, k as i64).clone(),
        None => t.bell(n as i64).clone(),
    }
}

fn engine_mean(stat: &StatisticId, t: &CountTables, n: usize, k: Option<usize>) -> Result<MeanReport> {
    let v = match VSequence::closed(stat, n) {
        Ok(v) => v,
        Err(_) => VSequence::enumerated(stat, stat.depth(), n.min(BRUTE_MAX_N)),
    };
    if v.max_m() < n {
        return Err(usage(format!("no closed v-sequence for {stat}; the engine is limited to n <= {BRUTE_MAX_N}")));
    }
    match k {
        Some(k) => zmean::mean_nk_engine(&v, t, n, k),
        None => zmean::mean_n_engine(&v, t, n),
    }
    .map_err(usage)
}

fn mean(cli: &Cli, a: &MeanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    check_n(cli, a.n)?;
    if let Some(k) = a.k {
        if k == 0 || k > a.n {
            return Err(usage(format!("need 1 <= k <= n, got n={}, k={k}", a.n)));
        }
    } else if a.n == 0 {
        return Err(usage("need n >= 1"));
    }
    let want = |m: Method| a.method == m || (a.method == Method::All && m != Method::Sampled);
    let t = CountTables::new(a.n + 2);
    let count = family_size(&t, a.n, a.k);

    let brute = if want(Method::Brute) {
        if a.n > BRUTE_MAX_N {
            if a.method == Method::Brute {
                return Err(usage(format!("brute force is limited to n <= {BRUTE_MAX_N}")));
            }
            None
        } else {
            zmean::brute_mean(&a.stat, a.n, a.k)
        }
    } else {
        None
    };
    let closed = if want(Method::Closed) {
        match closedforms::closed_mean(&a.stat, &t, a.n, a.k, a.variant.into()) {
            Ok(q) => Some(q),
            Err(ClosedError::NoClosedForm(_)) if a.method == Method::All => None,
            Err(e) => return Err(usage(e)),
        }
    } else {
        None
    };
    let engine = if want(Method::Engine) {
        match engine_mean(&a.stat, &t, a.n, a.k) {
            Ok(r) => Some(r),
            Err(_) if a.method == Method::All => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let sampled = if a.method == Method::Sampled {
        let cfg = SamplerConfig {
            n: a.n,
            k: a.k,
            seed: a.seed,
            trials: a.trials,
        };
        Some(sampler::empirical_mean(&a.stat, &cfg).map_err(usage)?)
    } else {
        None
    };

    let closed_report = closed.as_ref().map(|q| {
        let mut r = closed_report(q, a.n, a.k, &count);
        r.asymptotic = match a.k {
            Some(k) => asymptotics::asymptotic_mean_k(&a.stat, a.n, k).ok(),
            None => asymptotics::asymptotic_mean(&a.stat, a.n).ok(),
        };
        r
    });
    let reference = brute.as_ref().map(|r| r.mean.clone());
    let with_oracle = |r: MeanReport| match &reference {
        Some(q) => r.with_oracle(q),
        None => r,
    };
    let closed_report = closed_report.map(with_oracle);
    let engine = engine.map(with_oracle);

    let exact: Vec<(&str, &BigRational)> = [
        ("closed", closed.as_ref()),
        ("engine", engine.as_ref().map(|r| &r.mean)),
        ("brute", reference.as_ref()),
    ]
    .into_iter()
    .filter_map(|(name, q)| q.map(|q| (name, q)))
    .collect();
    let verdict = (exact.len() >= 2).then(|| exact.iter().all(|(_, q)| *q == exact[0].1));

    match a.format {
        Format::Json => {
            let output = MeanOutput {
                stat: a.stat.to_string(),
                n: a.n,
                k: a.k,
                variant: FormulaVariant::from(a.variant).as_str(),
                closed: closed_report.as_ref().map(MeanJson::from),
                engine: engine.as_ref().map(MeanJson::from),
                brute: brute.as_ref().map(MeanJson::from),
                sampled: sampled.as_ref().map(EstimateJson::from),
                verdict: verdict.map(|ok| if ok { "match" } else { "mismatch" }),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&output).expect("mean serializes"))?;
        }
        Format::Text | Format::Csv => {
            for (name, q) in &exact {
                writeln!(out, "{name:<8}{}", rat_string_short(q))?;
            }
            if let Some(e) = &sampled {
                writeln!(out, "{:<8}{} +- {} ({} trials)", "sampled", e.mean, e.stderr, e.trials)?;
            }
            match verdict {
                Some(true) => writeln!(out, "{:<8}match", "verdict")?,
                Some(false) => writeln!(out, "{:<8}MISMATCH", "verdict")?,
                None => {}
            }
        }
    }
    if verdict == Some(false) {
        let (base_name, base) = exact.last().expect("verdict needs values");
        for (name, q) in &exact[..exact.len() - 1] {
            if q != base {
                writeln!(
                    err,
                    "MISMATCH {name} {} vs {base_name} {} ({} n={}{})",
                    rat_string_short(q),
                    rat_string_short(base),
                    a.stat,
                    a.n,
                    a.k.map(|k| format!(" k={k}")).unwrap_or_default()
                )?;
            }
        }
        return Err(CliError::Mismatch);
    }
    Ok(())
}

fn closed_report(q: &BigRational, n: usize, k: Option<usize>, count: &num_bigint::BigInt) -> MeanReport {
    let total = q * BigRational::from_integer(count.clone());
    MeanReport::new(n, k, total.to_integer(), count)
}

/// `p/q`, or just `p` for integers.
fn rat_string_short(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        rat_string(q)
    }
}
