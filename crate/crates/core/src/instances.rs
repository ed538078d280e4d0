//! Market generators: synthetic unit-utility markets, the AGN-hard bucket
//! market, the geometric lower-bound market and Bayesian markets sampled
//! from a piecewise worst-case curve.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal, Uniform};

use crate::error::{Error, Result};
use crate::market::{AllocationRule, Market, Seller};
use crate::mechanisms::AgnRule;
use crate::rng::seeded_rng;
use crate::smoothed::PiecewiseCurve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub std: f64,
}

/// Cost distribution for synthetic markets. Negative draws are clamped to 0.
#[derive(Debug, Clone, PartialEq)]
pub enum CostDistribution {
    Normal { mean: f64, std: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { mean: f64 },
    Mixture(Vec<MixtureComponent>),
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidDistribution(format!(
            "{name} = {v} is not finite"
        )))
    }
}

impl CostDistribution {
    pub fn normal(mean: f64, std: f64) -> Result<Self> {
        let d = CostDistribution::Normal { mean, std };
        d.validate()?;
        Ok(d)
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let d = CostDistribution::Uniform { lo, hi };
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        let d = CostDistribution::Exponential { mean };
        d.validate()?;
        Ok(d)
    }

    /// Weights within 1e-3 of summing to one are renormalised exactly.
    pub fn mixture(mut components: Vec<MixtureComponent>) -> Result<Self> {
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if !((total - 1.0).abs() <= 1e-3) {
            return Err(Error::InvalidDistribution(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        for c in &mut components {
            c.weight /= total;
        }
        let d = CostDistribution::Mixture(components);
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        match self {
            CostDistribution::Normal { mean, std } => {
                finite("mean", *mean)?;
                if !(finite("std", *std)? > 0.0) {
                    return Err(Error::InvalidDistribution(format!(
                        "std = {std} must be > 0"
                    )));
                }
            }
            CostDistribution::Uniform { lo, hi } => {
                if finite("lo", *lo)? > finite("hi", *hi)? {
                    return Err(Error::InvalidDistribution(format!(
                        "uniform bounds {lo} > {hi}"
                    )));
                }
            }
            CostDistribution::Exponential { mean } => {
                if !(finite("mean", *mean)? > 0.0) {
                    return Err(Error::InvalidDistribution(format!(
                        "mean = {mean} must be > 0"
                    )));
                }
            }
            CostDistribution::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidDistribution("empty mixture".into()));
                }
                for c in parts {
                    if !(finite("weight", c.weight)? > 0.0) {
                        return Err(Error::InvalidDistribution(format!(
                            "weight = {} must be > 0",
                            c.weight
                        )));
                    }
                    CostDistribution::Normal {
                        mean: c.mean,
                        std: c.std,
                    }
                    .validate()?;
                }
            }
        }
        Ok(())
    }

    /// Short human label, e.g. `N(20,5)` or `1/2N(10,3)+1/2N(30,3)`.
    pub fn label(&self) -> String {
        match self {
            CostDistribution::Normal { mean, std } => format!("N({mean},{std})"),
            CostDistribution::Uniform { lo, hi } => format!("Unif({lo},{hi})"),
            CostDistribution::Exponential { mean } => format!("Exp({mean})"),
            CostDistribution::Mixture(parts) => parts
                .iter()
                .map(|c| {
                    let k = (1.0 / c.weight).round();
                    let w = if (k * c.weight - 1.0).abs() < 1e-9 {
                        format!("1/{k}")
                    } else {
                        format!("{}", c.weight)
                    };
                    format!("{w}N({},{})", c.mean, c.std)
                })
                .collect::<Vec<_>>()
                .join("+"),
        }
    }

    pub fn sampler(&self) -> Result<CostSampler> {
        let err = |e: &dyn fmt::Display| Error::InvalidDistribution(e.to_string());
        Ok(match self {
            CostDistribution::Normal { mean, std } => {
                CostSampler::Normal(Normal::new(*mean, *std).map_err(|e| err(&e))?)
            }
            CostDistribution::Uniform { lo, hi } => {
                CostSampler::Uniform(Uniform::new_inclusive(*lo, *hi).map_err(|e| err(&e))?)
            }
            CostDistribution::Exponential { mean } => {
                CostSampler::Exp(Exp::new(1.0 / mean).map_err(|e| err(&e))?)
            }
            CostDistribution::Mixture(parts) => {
                let mut cumulative = Vec::with_capacity(parts.len());
                let mut normals = Vec::with_capacity(parts.len());
                let mut acc = 0.0;
                for c in parts {
                    acc += c.weight;
                    cumulative.push(acc);
                    normals.push(Normal::new(c.mean, c.std).map_err(|e| err(&e))?);
                }
                CostSampler::Mixture {
                    cumulative,
                    normals,
                }
            }
        })
    }
}

/// Parses `normal:MEAN,STD`, `uniform:LO,HI`, `exp:MEAN` and
/// `mixture:W:MEAN:STD;W:MEAN:STD;...`.
impl FromStr for CostDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidDistribution(msg);
        let (kind, args) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| bad(format!("`{s}`: expected KIND:PARAMS")))?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("`{}`: {e}", t.trim())))
        };
        let list = |t: &str, sep: char, want: usize| -> Result<Vec<f64>> {
            let v = t.split(sep).map(num).collect::<Result<Vec<_>>>()?;
            if v.len() == want {
                Ok(v)
            } else {
                Err(bad(format!(
                    "`{t}`: expected {want} numbers, got {}",
                    v.len()
                )))
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "normal" | "n" => {
                let v = list(args, ',', 2)?;
                CostDistribution::normal(v[0], v[1])
            }
            "uniform" | "unif" => {
                let v = list(args, ',', 2)?;
                CostDistribution::uniform(v[0], v[1])
            }
            "exp" | "exponential" => {
                let v = list(args, ',', 1)?;
                CostDistribution::exponential(v[0])
            }
            "mixture" | "mix" => {
                let parts = args
                    .split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| {
                        let v = list(p, ':', 3)?;
                        Ok(MixtureComponent {
                            weight: v[0],
                            mean: v[1],
                            std: v[2],
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                CostDistribution::mixture(parts)
            }
            other => Err(bad(format!("unknown distribution kind `{other}`"))),
        }
    }
}

impl fmt::Display for CostDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostDistribution::Normal { mean, std } => write!(f, "normal:{mean},{std}"),
            CostDistribution::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            CostDistribution::Exponential { mean } => write!(f, "exp:{mean}"),
            CostDistribution::Mixture(parts) => {
                write!(f, "mixture:")?;
                for (k, c) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}:{}:{}", c.weight, c.mean, c.std)?;
                }
                Ok(())
            }
        }
    }
}

/// A validated distribution ready to draw from.
#[derive(Debug, Clone)]
pub enum CostSampler {
    Normal(Normal<f64>),
    Uniform(Uniform<f64>),
    Exp(Exp<f64>),
    Mixture {
        cumulative: Vec<f64>,
        normals: Vec<Normal<f64>>,
    },
}

impl CostSampler {
    /// One cost draw, clamped below at 0.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = match self {
            CostSampler::Normal(d) => d.sample(rng),
            CostSampler::Uniform(d) => d.sample(rng),
            CostSampler::Exp(d) => d.sample(rng),
            CostSampler::Mixture {
                cumulative,
                normals,
            } => {
                let u: f64 = rng.random();
                let k = cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(normals.len() - 1);
                normals[k].sample(rng)
            }
        };
        if x > 0.0 {
            x
        } else {
            0.0
        }
    }
}

/// The five synthetic cost distributions of the benchmark table.
pub fn table1_distributions() -> Vec<CostDistribution> {
    let third = 1.0 / 3.0;
    vec![
        CostDistribution::Normal {
            mean: 20.0,
            std: 5.0,
        },
        CostDistribution::Uniform { lo: 0.0, hi: 40.0 },
        CostDistribution::Exponential { mean: 20.0 },
        CostDistribution::Mixture(vec![
            MixtureComponent {
                weight: 0.5,
                mean: 10.0,
                std: 3.0,
            },
            MixtureComponent {
                weight: 0.5,
                mean: 30.0,
                std: 3.0,
            },
        ]),
        CostDistribution::Mixture(vec![
            MixtureComponent {
                weight: third,
                mean: 5.0,
                std: 3.0,
            },
            MixtureComponent {
                weight: third,
                mean: 20.0,
                std: 3.0,
            },
            MixtureComponent {
                weight: third,
                mean: 35.0,
                std: 3.0,
            },
        ]),
    ]
}

/// `n` unit-utility sellers with i.i.d. costs from `dist`.
pub fn gen_synthetic(n: usize, dist: &CostDistribution, seed: u64) -> Result<Market> {
    if n == 0 {
        return Err(Error::param("synthetic market needs n >= 1"));
    }
    let sampler = dist.sampler()?;
    let mut rng = seeded_rng(seed);
    let sellers = (0..n)
        .map(|_| Seller {
            cost: sampler.draw(&mut rng),
            utility: 1.0,
        })
        .collect();
    Ok(Market::new(sellers))
}

/// Parameters of the geometric lower-bound market: group `i ≥ 1` has total
/// utility `w^{i−1}` at ratio `q^{i−1}`, on top of a free unit-utility group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricMarketSpec {
    pub q: f64,
    pub w: f64,
    pub m: usize,
    pub n: usize,
}

impl GeometricMarketSpec {
    pub fn new(q: f64, w: f64, m: usize, n: usize) -> Result<Self> {
        let spec = GeometricMarketSpec { q, w, m, n };
        spec.validate()?;
        Ok(spec)
    }

    /// `q = 1 + 1/√2`, `w = 2`.
    pub fn standard(m: usize, n: usize) -> Result<Self> {
        GeometricMarketSpec::new(1.0 + std::f64::consts::FRAC_1_SQRT_2, 2.0, m, n)
    }

    fn validate(&self) -> Result<()> {
        if !(self.q > 1.0 && self.q.is_finite()) || !(self.w > 1.0 && self.w.is_finite()) {
            return Err(Error::param(format!(
                "need q > 1 and w > 1, got q = {}, w = {}",
                self.q, self.w
            )));
        }
        if self.m == 0 || self.n == 0 {
            return Err(Error::param("need m >= 1 and n >= 1"));
        }
        Ok(())
    }

    pub fn gamma(&self, group: usize) -> f64 {
        if group == 0 {
            0.0
        } else {
            self.q.powi(group as i32 - 1)
        }
    }

    pub fn group_utility(&self, group: usize) -> f64 {
        if group == 0 {
            1.0
        } else {
            self.w.powi(group as i32 - 1)
        }
    }
}

#[derive(Debug, Clone)]
pub struct LowerBoundMarket {
    pub market: Market,
    /// `B_i = Σ_{j≤i} (wq)^{j−1}` for `i = 1..m`.
    pub budgets: Vec<f64>,
    /// Smallest budget at which Greedy buys groups `0..=k`, `k = 1..m`.
    pub greedy_budgets: Vec<f64>,
}

pub fn gen_lower_bound_market(spec: &GeometricMarketSpec) -> Result<LowerBoundMarket> {
    spec.validate()?;
    let mut sellers = Vec::with_capacity((spec.m + 1) * spec.n);
    for group in 0..=spec.m {
        let u = spec.group_utility(group) / spec.n as f64;
        let g = spec.gamma(group);
        for _ in 0..spec.n {
            sellers.push(Seller {
                cost: g * u,
                utility: u,
            });
        }
    }
    let mut budgets = Vec::with_capacity(spec.m);
    let mut greedy_budgets = Vec::with_capacity(spec.m);
    let (mut b, mut below) = (0.0, spec.group_utility(0));
    for k in 1..=spec.m {
        b += spec.group_utility(k) * spec.gamma(k);
        below += spec.group_utility(k);
        budgets.push(b);
        greedy_budgets.push(spec.gamma(k) * below);
    }
    Ok(LowerBoundMarket {
        market: Market::new(sellers),
        budgets,
        greedy_budgets,
    })
}

#[derive(Debug, Clone)]
pub struct AgnHardMarket {
    pub market: Market,
    /// Companion budgets `B_i`.
    pub budgets: Vec<f64>,
    /// Bucket cost-per-utility `c_i`.
    pub costs: Vec<f64>,
    /// Bucket sizes `λ_i` (relative to `n`).
    pub weights: Vec<f64>,
    /// AGN scale `r_i` that exactly spends `B_i`.
    pub scales: Vec<f64>,
}

/// Bucket market on which AGN is held to `1 − 1/e` at every `B_i`.
///
/// A bucket of (non-integral) size `λ_i·n` is realised as
/// `max(1, round(λ_i·n))` identical sellers sharing utility `λ_i·n`.
pub fn gen_agn_hard(base_budget: f64, budget_ratios: &[f64], n: usize) -> Result<AgnHardMarket> {
    if !(base_budget > 0.0 && base_budget.is_finite()) || n == 0 {
        return Err(Error::param("need base budget > 0 and n >= 1"));
    }
    match budget_ratios.first() {
        Some(&r) if (r - 1.0).abs() <= 1e-12 => {}
        _ => return Err(Error::param("budget ratios must start at 1")),
    }
    if budget_ratios
        .windows(2)
        .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
    {
        return Err(Error::param("budget ratios must be strictly increasing"));
    }

    let target = 1.0 - 1.0 / E;
    let mut costs = vec![base_budget / n as f64];
    let mut weights = vec![1.0];
    let mut scales: Vec<f64> = Vec::with_capacity(budget_ratios.len());
    for i in 0..budget_ratios.len() {
        if i > 0 {
            let c = scales[i - 1] * (E - 1.0);
            let spent: f64 = weights.iter().zip(&costs).map(|(l, c)| l * c).sum();
            let step = budget_ratios[i] / budget_ratios[i - 1] - 1.0;
            costs.push(c);
            weights.push(step * spent / c);
        }
        let mass: f64 = weights.iter().sum();
        let excess = |r: f64| -> f64 {
            let rule = AgnRule::new(r).expect("positive scale");
            weights
                .iter()
                .zip(&costs)
                .map(|(l, &c)| l * rule.allocation(c))
                .sum::<f64>()
                - target * mass
        };
        let lo = costs[i] / (E - 1.0) * (1.0 + 1e-15);
        scales.push(bisect_increasing(excess, lo, 1e3 * costs[i], 1e-12)?);
    }

    let mut sellers = Vec::new();
    for (&l, &c) in weights.iter().zip(&costs) {
        let size = l * n as f64;
        let count = (size.round() as usize).max(1);
        let u = size / count as f64;
        sellers.extend(std::iter::repeat_n(
            Seller {
                cost: c * u,
                utility: u,
            },
            count,
        ));
    }
    Ok(AgnHardMarket {
        market: Market::new(sellers),
        budgets: budget_ratios.iter().map(|r| r * base_budget).collect(),
        costs,
        weights,
        scales,
    })
}

/// Root of an increasing function with `f(lo) < 0`; `hi` is doubled until
/// `f(hi) > 0`.
fn bisect_increasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi.max(lo * 2.0));
    if !(f(lo) < 0.0) {
        return Err(Error::Bracketing(format!(
            "function is not negative at {lo}"
        )));
    }
    let mut doublings = 0;
    while !(f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 1000 || !hi.is_finite() {
            return Err(Error::Bracketing("no sign change found".into()));
        }
    }
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `n` unit-utility sellers with costs drawn by inverse CDF from `curve`.
pub fn sample_bayesian_market(curve: &PiecewiseCurve, n: usize, seed: u64) -> Result<Market> {
    if n == 0 {
        return Err(Error::param("Bayesian market needs n >= 1"));
    }
    let mut rng = seeded_rng(seed);
    let sellers = (0..n)
        .map(|_| Seller {
            cost: curve.quantile(rng.random::<f64>()),
            utility: 1.0,
        })
        .collect();
    Ok(Market::new(sellers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::competitive_ratio;
    use crate::mechanisms::{agn, step_candidates, GreedyLadder};

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "normal:20,5",
            "uniform:0,40",
            "exp:20",
            "mixture:0.5:10:3;0.5:30:3",
        ] {
            let d: CostDistribution = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(d.to_string().parse::<CostDistribution>().unwrap(), d);
        }
        assert_eq!(
            "normal:20,5".parse::<CostDistribution>().unwrap().label(),
            "N(20,5)"
        );
        assert_eq!(
            table1_distributions()[4].label(),
            "1/3N(5,3)+1/3N(20,3)+1/3N(35,3)"
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in [
            "",
            "normal",
            "normal:1",
            "normal:1,0",
            "normal:1,-2",
            "uniform:3,1",
            "exp:0",
            "exp:nan",
            "mixture:0.3:1:1",
            "mixture:",
            "cauchy:0,1",
            "normal:1,x",
        ] {
            assert!(s.parse::<CostDistribution>().is_err(), "{s}");
        }
    }

    #[test]
    fn synthetic_is_deterministic_and_clamped() {
        let d = CostDistribution::normal(1.0, 5.0).unwrap();
        let a = gen_synthetic(500, &d, 7).unwrap();
        let b = gen_synthetic(500, &d, 7).unwrap();
        assert_eq!(a, b);
        assert!(a
            .sellers()
            .iter()
            .all(|s| s.cost >= 0.0 && s.utility == 1.0));
        assert!(a.sellers().iter().any(|s| s.cost == 0.0));
        assert_ne!(a, gen_synthetic(500, &d, 8).unwrap());
    }

    #[test]
    fn degenerate_uniform() {
        let m = gen_synthetic(3, &CostDistribution::uniform(20.0, 20.0).unwrap(), 1).unwrap();
        assert!(m.sellers().iter().all(|s| s.cost == 20.0));
    }

    #[test]
    fn exponential_mean() {
        let d = CostDistribution::exponential(20.0).unwrap();
        for seed in 0..5 {
            let m = gen_synthetic(1000, &d, seed).unwrap();
            let mean = m.total_cost() / 1000.0;
            assert!((mean - 20.0).abs() < 2.0, "{mean}");
        }
    }

    #[test]
    fn mixture_means() {
        let d = &table1_distributions()[3];
        let m = gen_synthetic(20000, d, 3).unwrap();
        let low = m.sellers().iter().filter(|s| s.cost < 20.0).count() as f64 / 20000.0;
        assert!((low - 0.5).abs() < 0.02);
    }

    #[test]
    fn lower_bound_budgets() {
        let spec = GeometricMarketSpec::standard(8, 3).unwrap();
        let lb = gen_lower_bound_market(&spec).unwrap();
        assert_eq!(lb.market.len(), 27);
        assert!((lb.budgets[1] - (3.0 + 2f64.sqrt())).abs() < 1e-12);
        for (k, &b) in lb.greedy_budgets.iter().enumerate() {
            let k = k as i32 + 1;
            assert!((b - spec.q.powi(k - 1) * spec.w.powi(k)).abs() < 1e-9 * b);
        }
        let free: f64 = lb
            .market
            .sellers()
            .iter()
            .filter(|s| s.cost == 0.0)
            .map(|s| s.utility)
            .sum();
        assert!((free - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_efficiency_decreases_in_j() {
        for m in 1..=10 {
            let lb = gen_lower_bound_market(&GeometricMarketSpec::standard(m, 2).unwrap()).unwrap();
            let ladder = GreedyLadder::new(&lb.market);
            for i in 1..=m {
                let row: Vec<f64> = step_candidates(&ladder, i).iter().map(|c| c.e_ij).collect();
                assert!(row.windows(2).all(|w| w[1] < w[0]), "m={m} i={i}: {row:?}");
            }
        }
    }

    #[test]
    fn agn_hard_single_bucket() {
        let h = gen_agn_hard(100.0, &[1.0], 50).unwrap();
        let c1 = 2.0;
        assert_eq!(h.costs, vec![c1]);
        let r1 = c1 / (E - (1.0 - 1.0 / E).exp());
        assert!((h.scales[0] - r1).abs() < 1e-10 * r1);
        assert!((h.scales[0] / c1 - 1.1952).abs() < 1e-4);
        assert!((h.scales[0] * (E - 1.0) / c1 - 2.05368).abs() < 1e-5);
    }

    #[test]
    fn agn_hard_identities() {
        let h = gen_agn_hard(1000.0, &[1.0, 2.5, 6.25], 200).unwrap();
        assert!(h.costs.windows(2).all(|w| w[0] < w[1]));
        assert!(h.scales.windows(2).all(|w| w[0] < w[1]));
        for (i, &b) in h.budgets.iter().enumerate() {
            let rule = AgnRule::new(h.scales[i]).unwrap();
            let pay: f64 = h
                .market
                .sellers()
                .iter()
                .map(|s| rule.payment_per_utility(s.cost / s.utility) * s.utility)
                .sum();
            assert!((pay - b).abs() <= 1e-8 * b, "{pay} vs {b}");
            let run = agn(&h.market, b).unwrap();
            let ratio = competitive_ratio(&run.outcome, &h.market, b);
            assert!((ratio - (1.0 - 1.0 / E)).abs() < 1e-6, "{ratio}");
        }
    }

    #[test]
    fn agn_hard_rejects_bad_ratios() {
        assert!(gen_agn_hard(1.0, &[], 10).is_err());
        assert!(gen_agn_hard(1.0, &[2.0], 10).is_err());
        assert!(gen_agn_hard(1.0, &[1.0, 1.0], 10).is_err());
        assert!(gen_agn_hard(0.0, &[1.0], 10).is_err());
    }

    #[test]
    fn bayesian_pure_atom() {
        let curve = PiecewiseCurve::new(vec![1.0], vec![1.0]).unwrap();
        let m = sample_bayesian_market(&curve, 100, 0).unwrap();
        assert!(m.sellers().iter().all(|s| s.cost == 0.0));
    }

    #[test]
    fn bayesian_empirical_cdf() {
        let curve = PiecewiseCurve::new(vec![0.2, 0.5], vec![1.0, 3.0]).unwrap();
        let n = 200_000;
        let m = sample_bayesian_market(&curve, n, 11).unwrap();
        let mut costs: Vec<f64> = m.sellers().iter().map(|s| s.cost).collect();
        costs.sort_by(f64::total_cmp);
        let top = *costs.last().unwrap();
        for k in 0..=50 {
            let c = top * k as f64 / 50.0;
            let emp = costs.partition_point(|&x| x <= c) as f64 / n as f64;
            assert!(
                (emp - curve.cdf(c)).abs() < 0.005,
                "c={c}: {emp} vs {}",
                curve.cdf(c)
            );
        }
    }
}
