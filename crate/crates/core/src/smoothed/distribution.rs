use std::io::Read;

use crate::error::{Error, Result};

/// Budget perturbation factors relative to the largest budget.
pub const MICROWORKERS: [f64; 10] = [
    0.124, 0.126, 0.154, 0.172, 0.236, 0.281, 0.299, 0.544, 0.625, 1.0,
];

/// Discrete distribution over budgets `ρ_k·B`, normalised so that the
/// largest `ρ` is 1 and the weights sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetDistribution {
    points: Vec<(f64, f64)>,
}

impl BudgetDistribution {
    /// Accepts any positive budgets (in any unit) and positive weights; sorts
    /// by budget and normalises.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDistribution("no budgets given".into()));
        }
        for &(rho, p) in &points {
            if !(rho > 0.0 && rho.is_finite()) || !(p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidDistribution(format!(
                    "budget {rho} with weight {p}: both must be finite and > 0"
                )));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("duplicate budget".into()));
        }
        let top = points.last().unwrap().0;
        let mass: f64 = points.iter().map(|p| p.1).sum();
        let mut points: Vec<(f64, f64)> = points
            .into_iter()
            .map(|(r, p)| (r / top, p / mass))
            .collect();
        points.last_mut().unwrap().0 = 1.0;
        Ok(BudgetDistribution { points })
    }

    /// Equal weights on the given budgets.
    pub fn uniform_grid(budgets: &[f64]) -> Result<Self> {
        BudgetDistribution::new(budgets.iter().map(|&b| (b, 1.0)).collect())
    }

    pub fn single() -> Self {
        BudgetDistribution {
            points: vec![(1.0, 1.0)],
        }
    }

    /// Budgets `1, 2, …, 10`.
    pub fn uniform_1_10() -> Self {
        let grid: Vec<f64> = (1..=10).map(f64::from).collect();
        BudgetDistribution::uniform_grid(&grid).expect("static grid")
    }

    /// Powers of two from 1 to `top`.
    pub fn log_uniform(top: u32) -> Result<Self> {
        if top == 0 || !top.is_power_of_two() {
            return Err(Error::InvalidDistribution(format!(
                "{top} is not a power of two"
            )));
        }
        let grid: Vec<f64> = (0..=top.trailing_zeros())
            .map(|k| f64::from(1u32 << k))
            .collect();
        BudgetDistribution::uniform_grid(&grid)
    }

    pub fn microworkers() -> Self {
        BudgetDistribution::uniform_grid(&MICROWORKERS).expect("static grid")
    }

    /// Budgets `ρB` and `B` with equal weight.
    pub fn two_budget(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "rho = {rho} must lie in (0, 1)"
            )));
        }
        BudgetDistribution::uniform_grid(&[rho, 1.0])
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "single" => Ok(BudgetDistribution::single()),
            "uniform-1-10" => Ok(BudgetDistribution::uniform_1_10()),
            "log-uniform-1-8" => BudgetDistribution::log_uniform(8),
            "log-uniform-1-512" => BudgetDistribution::log_uniform(512),
            "microworkers" => Ok(BudgetDistribution::microworkers()),
            other => Err(Error::InvalidDistribution(format!(
                "unknown preset `{other}`"
            ))),
        }
    }

    /// `(ρ_k, p_k)` with `ρ` strictly increasing and `ρ_m = 1`.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parse a `rho,prob` CSV. Lines starting with `#` are skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.len() != 2 || &header[0] != "rho" || &header[1] != "prob" {
            return Err(Error::Parse {
                line: header.position().map_or(1, |p| p.line() as usize),
                message: format!("expected header `rho,prob`, got `{}`", header.as_slice()),
            });
        }
        let mut points = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let field = |k: usize| -> Result<f64> {
                let raw = record.get(k).unwrap_or("");
                raw.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("`{raw}`: {e}"),
                })
            };
            points.push((field(0)?, field(1)?));
        }
        BudgetDistribution::new(points)
    }
}
