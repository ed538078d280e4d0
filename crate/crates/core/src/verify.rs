//! Fast invariant suite with independent oracles (quadrature, brute-force
//! 0/1 knapsack, a grid of step rules).

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::knapsack::non_ic_optimum;
use crate::market::{
    rule_totals, rule_totals_via_lottery, AllocationRule, Market, Seller, TwoStepRule,
};
use crate::mechanisms::{agn, cutoff, greedy, AgnRule, MechanismKind, RsGreedyParams};
use crate::rng::stream;
use crate::smoothed::lambert_w_minus1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    AgnPayment,
    LambertInverse,
    LotteryIdentities,
    Truthfulness,
    BudgetFeasibility,
    KnapsackConcavity,
    KnapsackBruteforce,
    InstanceOptimality,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::AgnPayment,
        Property::LambertInverse,
        Property::LotteryIdentities,
        Property::Truthfulness,
        Property::BudgetFeasibility,
        Property::KnapsackConcavity,
        Property::KnapsackBruteforce,
        Property::InstanceOptimality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::AgnPayment => "agn-payment",
            Property::LambertInverse => "lambert-inverse",
            Property::LotteryIdentities => "lottery-identities",
            Property::Truthfulness => "truthfulness",
            Property::BudgetFeasibility => "budget-feasibility",
            Property::KnapsackConcavity => "knapsack-concavity",
            Property::KnapsackBruteforce => "knapsack-bruteforce",
            Property::InstanceOptimality => "instance-optimality",
        }
    }

    /// Default number of random cases.
    pub fn default_samples(self) -> usize {
        match self {
            Property::AgnPayment | Property::LambertInverse => 1000,
            Property::LotteryIdentities => 1000,
            Property::Truthfulness => 300,
            Property::BudgetFeasibility => 1000,
            Property::KnapsackConcavity => 200,
            Property::KnapsackBruteforce => 300,
            Property::InstanceOptimality => 100,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::param(format!("unknown property `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides [`Property::default_samples`].
    pub samples: Option<usize>,
    /// Largest market size for the market-based properties.
    pub max_sellers: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 42,
            samples: None,
            max_sellers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub property: Property,
    pub passed: bool,
    pub checks: usize,
    /// Largest observed error or violation, in the property's own units.
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<20} checks={:<6} worst={:.3e} tol={:.0e} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.property.name(),
            self.checks,
            self.worst,
            self.tolerance,
            self.seconds
        )
    }
}

/// Running maximum of an error against a tolerance.
struct Tally {
    checks: usize,
    worst: f64,
    tolerance: f64,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Tally {
            checks: 0,
            worst: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, err: f64) {
        self.checks += 1;
        if err.is_nan() || err > self.worst {
            self.worst = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn finish(self, property: Property, start: Instant) -> PropertyReport {
        PropertyReport {
            property,
            passed: self.worst <= self.tolerance,
            checks: self.checks,
            worst: self.worst,
            tolerance: self.tolerance,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Composite Simpson rule on `[a, b]` with `2k` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, k: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = 2 * k.max(1);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Exact 0/1 knapsack by enumerating every subset.
pub fn brute_force_knapsack(sellers: &[Seller], budget: f64) -> f64 {
    assert!(sellers.len() <= 20, "brute force is exponential");
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << sellers.len()) {
        let (mut c, mut u) = (0.0, 0.0);
        for (k, s) in sellers.iter().enumerate() {
            if mask & (1 << k) != 0 {
                c += s.cost;
                u += s.utility;
            }
        }
        if c <= budget {
            best = best.max(u);
        }
    }
    best
}

/// Every `(t, p₁, p₂)` with prices among `{0} ∪ γ`-values (or `p₁` absent)
/// and `t ∈ {0, 0.05, …, 0.95}`.
pub fn two_step_grid(market: &Market) -> Vec<TwoStepRule> {
    let mut prices: Vec<f64> = (0..market.len()).map(|i| market.gamma(i)).collect();
    prices.push(0.0);
    prices.sort_by(f64::total_cmp);
    prices.dedup();
    let mut rules = Vec::new();
    for (k, &p2) in prices.iter().enumerate() {
        for step in 0..20 {
            let t = step as f64 * 0.05;
            rules.push(TwoStepRule::new(t, None, p2).expect("valid grid rule"));
            for &p1 in &prices[..=k] {
                rules.push(TwoStepRule::new(t, Some(p1), p2).expect("valid grid rule"));
            }
        }
    }
    rules
}

fn random_market(rng: &mut ChaCha8Rng, max_n: usize, integer: bool) -> Market {
    let n = rng.random_range(1..=max_n.max(1));
    let sellers = (0..n)
        .map(|_| {
            if integer {
                Seller {
                    cost: rng.random_range(0..=10) as f64,
                    utility: rng.random_range(1..=5) as f64,
                }
            } else {
                // Coarse costs produce ties; a few zero-cost sellers appear.
                let cost = if rng.random_bool(0.1) {
                    0.0
                } else if rng.random_bool(0.5) {
                    rng.random_range(1..=20) as f64
                } else {
                    rng.random_range(0.0..20.0)
                };
                Seller {
                    cost,
                    utility: rng.random_range(0.2..3.0),
                }
            }
        })
        .collect();
    Market::new(sellers)
}

pub fn run_property(property: Property, opts: &VerifyOptions) -> Result<PropertyReport> {
    let start = Instant::now();
    let samples = opts.samples.unwrap_or(property.default_samples()).max(1);
    let mut rng = stream(opts.seed, property.name(), 0);
    let max_n = opts.max_sellers;
    let report = match property {
        Property::AgnPayment => {
            let mut tally = Tally::new(1e-8);
            for _ in 0..samples {
                let rule = AgnRule::new(rng.random_range(0.05..20.0))?;
                let cap = rule.r() * (E - 1.0);
                let gamma = rng.random_range(0.0..cap * 1.2);
                let closed = rule.payment_per_utility(gamma);
                let f = |z: f64| rule.allocation(z);
                let quad = gamma * f(gamma) + simpson(f, gamma.min(cap), cap, 2000);
                tally.record(rel_err(closed, quad));
            }
            tally.finish(property, start)
        }
        Property::LambertInverse => {
            let mut tally = Tally::new(1e-10);
            for _ in 0..samples {
                let w = rng.random_range(-30.0..-1.0);
                let back = lambert_w_minus1(w * f64::exp(w))?;
                tally.record(rel_err(back, w));
            }
            tally.finish(property, start)
        }
        Property::LotteryIdentities => {
            let mut tally = Tally::new(1e-10);
            for _ in 0..samples {
                let market = random_market(&mut rng, max_n.unwrap_or(40), false);
                let grid = two_step_grid(&market);
                let rule = grid[rng.random_range(0..grid.len())];
                let (u1, b1) = rule_totals(&rule, market.sellers());
                let (u2, b2) = rule_totals_via_lottery(&rule, market.sellers());
                tally.record(rel_err(u1, u2).max(rel_err(b1, b2)));
            }
            tally.finish(property, start)
        }
        Property::Truthfulness => {
            // Profit Q(z) − f(z)γ is maximised by the truthful report z = γ,
            // and Q(γ) ≥ γ·f(γ).
            let mut tally = Tally::new(1e-12);
            for k in 0..samples {
                let top = rng.random_range(0.5..10.0);
                let rule: Box<dyn AllocationRule> = if k % 2 == 0 {
                    let p2 = rng.random_range(0.0..top);
                    let p1 = rng.random_bool(0.8).then(|| rng.random_range(0.0..=p2));
                    Box::new(TwoStepRule::new(rng.random_range(0.0..1.0), p1, p2)?)
                } else {
                    Box::new(AgnRule::new(top / (E - 1.0))?)
                };
                let gamma = rng.random_range(0.0..top * 1.2);
                let profit = |z: f64| rule.payment_per_utility(z) - rule.allocation(z) * gamma;
                let truthful = profit(gamma);
                let best_lie = (0..=400)
                    .map(|i| profit(top * 1.5 * i as f64 / 400.0))
                    .fold(f64::NEG_INFINITY, f64::max);
                let ir = gamma * rule.allocation(gamma) - rule.payment_per_utility(gamma);
                tally.record(((best_lie - truthful) / top).max(ir / top).max(0.0));
            }
            tally.finish(property, start)
        }
        Property::BudgetFeasibility => {
            let mut tally = Tally::new(1e-9);
            for k in 0..samples {
                let market = random_market(&mut rng, max_n.unwrap_or(60), false);
                let budget = rng.random_range(0.0..1.3) * market.total_cost();
                let kind = MechanismKind::ALL[k % 4];
                let params = if rng.random_bool(0.5) {
                    RsGreedyParams::zeros(rng.random())
                } else {
                    RsGreedyParams {
                        epsilon1: rng.random_range(0.0..0.3),
                        delta1: rng.random_range(0.0..0.3),
                        eta: rng.random_range(0.0..0.5),
                        top_c: rng.random_range(0..=market.len().min(3)),
                        seed: rng.random(),
                    }
                };
                let out = kind.run(&market, budget, &params)?;
                let mut violation = out.total_payment - budget;
                if kind != MechanismKind::RsGreedy || params.top_c == 0 {
                    violation = violation.max(out.worst_ir_violation(&market));
                }
                tally.record(violation.max(0.0));
            }
            tally.finish(property, start)
        }
        Property::KnapsackConcavity => {
            let mut tally = Tally::new(1e-9);
            for _ in 0..samples {
                let market = random_market(&mut rng, max_n.unwrap_or(50), false);
                let budget = rng.random_range(0.0..1.2) * market.total_cost();
                let full = non_ic_optimum(&market, budget).utility;
                let mut prev = non_ic_optimum(&market, 0.0).utility;
                for step in 1..=9 {
                    let theta = step as f64 / 10.0;
                    let part = non_ic_optimum(&market, (1.0 - theta) * budget).utility;
                    tally.record((1.0 - theta) * full - part);
                    let b = theta * budget;
                    let now = non_ic_optimum(&market, b).utility;
                    tally.record(prev - now);
                    prev = now;
                }
            }
            tally.finish(property, start)
        }
        Property::KnapsackBruteforce => {
            let mut tally = Tally::new(1e-9);
            for _ in 0..samples {
                let market = random_market(&mut rng, max_n.unwrap_or(12).min(12), true);
                let budget = rng.random_range(0..=40) as f64;
                let frac = non_ic_optimum(&market, budget);
                let exact = brute_force_knapsack(market.sellers(), budget);
                tally.record(exact - frac.utility);
                if frac.fractions.iter().all(|&x| x == 0.0 || x == 1.0) {
                    tally.record((exact - frac.utility).abs());
                }
            }
            tally.finish(property, start)
        }
        Property::InstanceOptimality => {
            let mut tally = Tally::new(1e-9);
            for _ in 0..samples {
                let market = random_market(&mut rng, max_n.unwrap_or(50), false);
                let budget = rng.random_range(0.0..1.2) * market.total_cost();
                let g = greedy(&market, budget)?.outcome.total_utility;
                let slack = 1e-12 * market.total_utility();
                tally.record(cutoff(&market, budget)?.outcome.total_utility - g - slack);
                tally.record(agn(&market, budget)?.outcome.total_utility - g - slack);
                let best_grid = two_step_grid(&market)
                    .iter()
                    .map(|r| rule_totals(r, market.sellers()))
                    .filter(|&(_, pay)| pay <= budget)
                    .map(|(u, _)| u)
                    .fold(0.0, f64::max);
                tally.record(best_grid - g - slack);
            }
            tally.finish(property, start)
        }
    };
    Ok(report)
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<PropertyReport>> {
    Property::ALL
        .iter()
        .map(|&p| run_property(p, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - x, 0.0, 2.0, 3);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn brute_force_small() {
        let s = [
            Seller {
                cost: 3.0,
                utility: 4.0,
            },
            Seller {
                cost: 2.0,
                utility: 3.0,
            },
            Seller {
                cost: 2.0,
                utility: 2.5,
            },
        ];
        assert_eq!(brute_force_knapsack(&s, 4.0), 5.5);
        assert_eq!(brute_force_knapsack(&s, 1.0), 0.0);
    }

    #[test]
    fn grid_contains_greedy_rule() {
        let m = Market::from_pairs([(1.0, 1.0), (2.0, 1.0)]).unwrap();
        let grid = two_step_grid(&m);
        assert!(grid
            .iter()
            .all(|r| r.low_price().is_none_or(|p| p <= r.high_price())));
        assert!(grid.contains(&TwoStepRule::cutoff(1.0).unwrap()));
    }

    #[test]
    fn every_property_passes_quickly() {
        let opts = VerifyOptions {
            seed: 7,
            samples: Some(20),
            max_sellers: None,
        };
        for r in run_all(&opts).unwrap() {
            assert!(r.passed, "{r}");
        }
    }
}
