//! Seeded Monte-Carlo harness for competitive-ratio tables.
//!
//! Run `r` draws its instance from the stream `(seed, "instance", r)`, so all
//! mechanisms in a run see the same market. RS-Greedy's partition uses the
//! separate stream `(seed, "rs_greedy", r)`. Runs fan out over rayon and are
//! reduced in run-index order.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instances::{gen_synthetic, table1_distributions, CostDistribution};
use crate::knapsack::competitive_ratio;
use crate::market::Market;
use crate::mechanisms::{MechanismKind, RsGreedyParams};
use crate::rng::split_seed;

pub const TABLE1_SELLERS: usize = 1000;
pub const TABLE1_BUDGET: f64 = 20_000.0;
pub const TABLE1_RUNS: usize = 100;
pub const FIGURE1_SIZES: [usize; 5] = [125, 250, 500, 1000, 2000];
pub const FIGURE1_RUNS: usize = 20;
pub const FIGURE1_BUDGET_PER_SELLER: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    /// `n` unit-utility sellers with costs from `dist`, freshly drawn per run.
    Synthetic { dist: CostDistribution, n: usize },
    /// The same market in every run.
    Fixed { label: String, market: Market },
}

impl InstanceSpec {
    pub fn label(&self) -> String {
        match self {
            InstanceSpec::Synthetic { dist, .. } => dist.label(),
            InstanceSpec::Fixed { label, .. } => label.clone(),
        }
    }

    fn realise(&self, seed: u64) -> Result<Market> {
        match self {
            InstanceSpec::Synthetic { dist, n } => gen_synthetic(*n, dist, seed),
            InstanceSpec::Fixed { market, .. } => Ok(market.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mechanisms: Vec<MechanismKind>,
    pub instance: InstanceSpec,
    pub budgets: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    /// RS-Greedy parameters; the seed field is replaced per run.
    pub rs_params: RsGreedyParams,
    /// Record wall-clock seconds per cell; off gives byte-identical reports.
    pub record_timing: bool,
}

impl ExperimentSpec {
    pub fn synthetic(
        dist: CostDistribution,
        n: usize,
        budget: f64,
        runs: usize,
        seed: u64,
    ) -> Self {
        ExperimentSpec {
            mechanisms: MechanismKind::ALL.to_vec(),
            instance: InstanceSpec::Synthetic { dist, n },
            budgets: vec![budget],
            runs,
            seed,
            rs_params: RsGreedyParams::zeros(0),
            record_timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::param("runs must be >= 1"));
        }
        if self.mechanisms.is_empty() {
            return Err(Error::param("no mechanisms selected"));
        }
        if self.budgets.is_empty() || self.budgets.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return Err(Error::param("budgets must be finite and > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub mechanism: String,
    pub instance: String,
    pub runs: usize,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub const BENCH_HEADER: &str =
    "mechanism,instance,runs,mean_ratio,std_ratio,min_ratio,max_ratio,seconds";

impl BenchReport {
    pub fn row(&self, mechanism: &str, instance: &str) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.mechanism == mechanism && r.instance == instance)
    }

    pub fn extend(&mut self, other: BenchReport) {
        self.rows.extend(other.rows);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{BENCH_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                csv_field(&r.mechanism),
                csv_field(&r.instance),
                r.runs,
                r.mean_ratio,
                r.std_ratio,
                r.min_ratio,
                r.max_ratio,
                r.seconds
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Mean, sample standard deviation (`n − 1` denominator), min and max.
pub fn summarize(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, std, min, max)
}

/// Ratios of every mechanism at every budget for run `r`, indexed
/// `[budget][mechanism]`, with per-cell seconds.
fn run_once(spec: &ExperimentSpec, r: usize) -> Result<Vec<Vec<(f64, f64)>>> {
    let market = spec
        .instance
        .realise(split_seed(spec.seed, "instance", r as u64))?;
    let params = spec.rs_params.with_seed(split_seed(
        spec.seed,
        MechanismKind::RsGreedy.name(),
        r as u64,
    ));
    spec.budgets
        .iter()
        .map(|&budget| {
            spec.mechanisms
                .iter()
                .map(|kind| {
                    let start = Instant::now();
                    let outcome = kind.run(&market, budget, &params)?;
                    let ratio = competitive_ratio(&outcome, &market, budget);
                    Ok((ratio, start.elapsed().as_secs_f64()))
                })
                .collect()
        })
        .collect()
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<BenchReport> {
    spec.validate()?;
    let runs: Vec<_> = (0..spec.runs)
        .into_par_iter()
        .map(|r| run_once(spec, r).map_err(|e| e.in_run(r)))
        .collect::<Result<Vec<_>>>()?;

    let label = spec.instance.label();
    let mut report = BenchReport::default();
    for (b, &budget) in spec.budgets.iter().enumerate() {
        let instance = if spec.budgets.len() == 1 {
            label.clone()
        } else {
            format!("{label}@B={budget}")
        };
        for (k, kind) in spec.mechanisms.iter().enumerate() {
            let ratios: Vec<f64> = runs.iter().map(|run| run[b][k].0).collect();
            let seconds: f64 = runs.iter().map(|run| run[b][k].1).sum();
            let (mean, std, min, max) = summarize(&ratios);
            report.rows.push(BenchRow {
                mechanism: kind.name().to_string(),
                instance: instance.clone(),
                runs: spec.runs,
                mean_ratio: mean,
                std_ratio: std,
                min_ratio: min,
                max_ratio: max,
                seconds: if spec.record_timing { seconds } else { 0.0 },
            });
        }
    }
    Ok(report)
}

/// The five synthetic benchmark rows: 1000 sellers, budget 20000.
pub fn table1_specs(runs: usize, seed: u64) -> Vec<ExperimentSpec> {
    table1_distributions()
        .into_iter()
        .map(|d| ExperimentSpec::synthetic(d, TABLE1_SELLERS, TABLE1_BUDGET, runs, seed))
        .collect()
}

pub fn run_table1(runs: usize, seed: u64, record_timing: bool) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    for mut spec in table1_specs(runs, seed) {
        spec.record_timing = record_timing;
        report.extend(run_experiment(&spec)?);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub instance: String,
    pub n: usize,
    pub runs: usize,
    /// Mean and sample std of `ratio(Greedy) − ratio(RS-Greedy)`.
    pub mean_gap: f64,
    pub std_gap: f64,
    /// Mean and sample std of `|ratio(Greedy) − ratio(RS-Greedy)|`.
    pub mean_abs_gap: f64,
    pub std_abs_gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GapTable {
    pub rows: Vec<GapRow>,
}

pub const GAP_HEADER: &str = "instance,n,runs,mean_gap,std_gap,mean_abs_gap,std_abs_gap";

impl GapTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{GAP_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{:.6},{:.6},{:.6},{:.6}",
                csv_field(&r.instance),
                r.n,
                r.runs,
                r.mean_gap,
                r.std_gap,
                r.mean_abs_gap,
                r.std_abs_gap
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

/// Greedy versus RS-Greedy on `n`-seller markets with budget
/// `budget_per_seller · n`, for each `n`.
pub fn gap_sweep(
    dist: &CostDistribution,
    n_values: &[usize],
    budget_per_seller: f64,
    runs: usize,
    seed: u64,
) -> Result<GapTable> {
    if n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("market sizes must be strictly increasing"));
    }
    let mut table = GapTable::default();
    for &n in n_values {
        let spec = ExperimentSpec {
            mechanisms: vec![MechanismKind::Greedy, MechanismKind::RsGreedy],
            instance: InstanceSpec::Synthetic {
                dist: dist.clone(),
                n,
            },
            budgets: vec![budget_per_seller * n as f64],
            runs,
            seed: split_seed(seed, "gap-sweep", n as u64),
            rs_params: RsGreedyParams::zeros(0),
            record_timing: false,
        };
        spec.validate()?;
        let gaps: Vec<f64> = (0..runs)
            .into_par_iter()
            .map(|r| {
                let cell = run_once(&spec, r).map_err(|e| e.in_run(r))?;
                Ok(cell[0][0].0 - cell[0][1].0)
            })
            .collect::<Result<Vec<_>>>()?;
        let abs: Vec<f64> = gaps.iter().map(|g| g.abs()).collect();
        let (mean_gap, std_gap, _, _) = summarize(&gaps);
        let (mean_abs_gap, std_abs_gap, _, _) = summarize(&abs);
        table.rows.push(GapRow {
            instance: dist.label(),
            n,
            runs,
            mean_gap,
            std_gap,
            mean_abs_gap,
            std_abs_gap,
        });
    }
    Ok(table)
}

/// The three distributions of the market-size sweep.
pub fn figure1_distributions() -> Vec<CostDistribution> {
    table1_distributions().into_iter().take(3).collect()
}

pub fn run_figure1(runs: usize, seed: u64) -> Result<GapTable> {
    let mut table = GapTable::default();
    for d in figure1_distributions() {
        let t = gap_sweep(&d, &FIGURE1_SIZES, FIGURE1_BUDGET_PER_SELLER, runs, seed)?;
        table.rows.extend(t.rows);
    }
    Ok(table)
}
