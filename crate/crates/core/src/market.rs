//! Sellers, markets, uniform step allocation rules and Myerson payments.
//!
//! Every mechanism in this crate is *uniform*: it applies one non-increasing
//! allocation function `f` of the cost-per-utility ratio `γ = c/u` to every
//! seller and pays `Q_f(γ)·u`, where `Q_f(γ) = γ·f(γ) + ∫_γ^∞ f(z) dz`.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Relative tolerance under which two `γ` values are treated as one price level.
pub const GAMMA_REL_TOL: f64 = 1e-12;

pub(crate) fn gamma_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= GAMMA_REL_TOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seller {
    pub cost: f64,
    pub utility: f64,
}

impl Seller {
    pub fn new(cost: f64, utility: f64) -> Result<Self> {
        if !(cost.is_finite() && cost >= 0.0) {
            return Err(Error::InvalidSeller(format!(
                "cost {cost} must be finite and >= 0"
            )));
        }
        if !(utility.is_finite() && utility >= 0.0) {
            return Err(Error::InvalidSeller(format!(
                "utility {utility} must be finite and >= 0"
            )));
        }
        Ok(Seller { cost, utility })
    }

    /// Cost per unit of utility; `None` for a zero-utility seller.
    pub fn gamma(&self) -> Option<f64> {
        (self.utility > 0.0).then(|| self.cost / self.utility)
    }
}

/// A finite list of sellers facing one buyer.
///
/// Zero-utility sellers are dropped on construction, so every seller in a
/// `Market` has a well-defined `γ`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Market {
    sellers: Vec<Seller>,
}

impl Market {
    pub fn new(sellers: Vec<Seller>) -> Self {
        Market {
            sellers: sellers.into_iter().filter(|s| s.utility > 0.0).collect(),
        }
    }

    /// Build from `(cost, utility)` pairs, validating each.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let sellers = pairs
            .into_iter()
            .map(|(c, u)| Seller::new(c, u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Market::new(sellers))
    }

    /// `n` unit-utility sellers of cost `cost` each.
    pub fn uniform(n: usize, cost: f64) -> Result<Self> {
        Market::from_pairs(std::iter::repeat_n((cost, 1.0), n))
    }

    pub fn sellers(&self) -> &[Seller] {
        &self.sellers
    }

    pub fn len(&self) -> usize {
        self.sellers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sellers.is_empty()
    }

    pub fn gamma(&self, i: usize) -> f64 {
        let s = &self.sellers[i];
        s.cost / s.utility
    }

    pub fn total_utility(&self) -> f64 {
        self.sellers.iter().map(|s| s.utility).sum()
    }

    pub fn total_cost(&self) -> f64 {
        self.sellers.iter().map(|s| s.cost).sum()
    }

    /// `max_i c_i / B`; the small-bidder assumption wants this to be `o(1)`.
    pub fn max_cost_share(&self, budget: f64) -> f64 {
        let max_cost = self.sellers.iter().map(|s| s.cost).fold(0.0, f64::max);
        if budget > 0.0 {
            max_cost / budget
        } else if max_cost > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    pub fn subset(&self, indices: &[usize]) -> Market {
        Market {
            sellers: indices.iter().map(|&i| self.sellers[i]).collect(),
        }
    }

    /// Sellers grouped into distinct `γ` levels, ascending.
    pub fn price_levels(&self) -> PriceLevels {
        PriceLevels::new(self)
    }

    /// Parse the `cost,utility` CSV format. Lines starting with `#` are skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.len() != 2 || &header[0] != "cost" || &header[1] != "utility" {
            return Err(Error::Parse {
                line: header.position().map_or(1, |p| p.line() as usize),
                message: format!(
                    "expected header `cost,utility`, got `{}`",
                    header.as_slice()
                ),
            });
        }
        let mut sellers = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 2 fields, got {}", record.len()),
                });
            }
            let field = |k: usize| -> Result<f64> {
                record[k].parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("`{}`: {e}", &record[k]),
                })
            };
            let (cost, utility) = (field(0)?, field(1)?);
            let seller = Seller::new(cost, utility).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            sellers.push(seller);
        }
        Ok(Market::new(sellers))
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "cost,utility")?;
        for s in &self.sellers {
            writeln!(writer, "{},{}", s.cost, s.utility)?;
        }
        Ok(())
    }
}

/// One group of sellers sharing (within [`GAMMA_REL_TOL`]) the same `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceLevel {
    /// Merged ratio `Σc / Σu` of the members.
    pub gamma: f64,
    pub utility: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PriceLevels {
    pub levels: Vec<PriceLevel>,
    /// Level index of each market seller.
    pub level_of: Vec<usize>,
}

impl PriceLevels {
    fn new(market: &Market) -> Self {
        let n = market.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| market.gamma(a).total_cmp(&market.gamma(b)).then(a.cmp(&b)));
        let mut levels: Vec<PriceLevel> = Vec::new();
        let mut level_of = vec![0; n];
        let mut anchor = f64::NAN;
        let mut cost_sum = 0.0;
        for &i in &order {
            let g = market.gamma(i);
            let s = market.sellers()[i];
            // γ = 0 only groups with exact zeros so the zero-cost group stays exact.
            let same = !levels.is_empty() && (g != 0.0 || anchor == 0.0) && gamma_eq(anchor, g);
            if !same {
                if let Some(last) = levels.last_mut() {
                    last.gamma = cost_sum / last.utility;
                }
                levels.push(PriceLevel {
                    gamma: g,
                    utility: 0.0,
                    members: Vec::new(),
                });
                anchor = g;
                cost_sum = 0.0;
            }
            let last = levels.last_mut().expect("pushed above");
            last.utility += s.utility;
            last.members.push(i);
            cost_sum += s.cost;
            level_of[i] = levels.len() - 1;
        }
        if let Some(last) = levels.last_mut() {
            last.gamma = if anchor == 0.0 {
                0.0
            } else {
                cost_sum / last.utility
            };
        }
        PriceLevels { levels, level_of }
    }

    /// Utility of the `γ = 0` level (zero if there is none).
    pub fn zero_cost_utility(&self) -> f64 {
        match self.levels.first() {
            Some(l) if l.gamma == 0.0 => l.utility,
            _ => 0.0,
        }
    }
}

/// A one-dimensional non-increasing allocation function `f: γ ↦ [0, 1]`.
pub trait AllocationRule {
    fn allocation(&self, gamma: f64) -> f64;

    /// Smallest `z` with `f(z') = 0` for all `z' > z`, or `None` if `f` never
    /// reaches zero.
    fn support_end(&self) -> Option<f64>;

    /// `∫_γ^∞ f(z) dz`, only called when the support is bounded.
    fn tail_integral(&self, gamma: f64) -> f64;

    /// Closed-form Myerson payment per unit of utility.
    fn payment_per_utility(&self, gamma: f64) -> f64 {
        gamma * self.allocation(gamma) + self.tail_integral(gamma)
    }
}

/// Myerson's payment per utility `Q_f(γ) = γ·f(γ) + ∫_γ^∞ f(z) dz`.
pub fn myerson_payment<R: AllocationRule + ?Sized>(rule: &R, gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::param(format!(
            "gamma {gamma} must be finite and >= 0"
        )));
    }
    if rule.support_end().is_none() {
        return Err(Error::UnboundedSupport);
    }
    Ok(rule.payment_per_utility(gamma))
}

/// The `(t, p₁, p₂)` step rule: `1` up to `p₁`, `t` up to `p₂`, then `0`.
///
/// `low_price = None` encodes a low offer no seller accepts, so `f(0) = t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStepRule {
    t: f64,
    low_price: Option<f64>,
    high_price: f64,
}

impl TwoStepRule {
    pub fn new(t: f64, low_price: Option<f64>, high_price: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::InvalidRule(format!("t = {t} must lie in [0, 1)")));
        }
        if !(high_price.is_finite() && high_price >= 0.0) {
            return Err(Error::InvalidRule(format!(
                "high price {high_price} must be >= 0"
            )));
        }
        if let Some(p1) = low_price {
            if !(p1.is_finite() && p1 >= 0.0 && p1 <= high_price) {
                return Err(Error::InvalidRule(format!(
                    "low price {p1} must satisfy 0 <= p1 <= p2 = {high_price}"
                )));
            }
        }
        Ok(TwoStepRule {
            t,
            low_price,
            high_price,
        })
    }

    /// The single posted price `p`: `f = 1` on `[0, p]`.
    pub fn cutoff(price: f64) -> Result<Self> {
        TwoStepRule::new(0.0, Some(price), price)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn low_price(&self) -> Option<f64> {
        self.low_price
    }

    pub fn high_price(&self) -> f64 {
        self.high_price
    }

    pub fn evaluate(&self, gamma: f64) -> f64 {
        match self.low_price {
            Some(p1) if gamma <= p1 => 1.0,
            _ if gamma <= self.high_price => self.t,
            _ => 0.0,
        }
    }

    /// Same `(t, p₂)` with the low offer removed.
    pub fn without_low_price(&self) -> Self {
        TwoStepRule {
            low_price: None,
            ..*self
        }
    }
}

impl AllocationRule for TwoStepRule {
    fn allocation(&self, gamma: f64) -> f64 {
        self.evaluate(gamma)
    }

    fn support_end(&self) -> Option<f64> {
        Some(self.high_price)
    }

    fn tail_integral(&self, gamma: f64) -> f64 {
        let p2 = self.high_price;
        match self.low_price {
            Some(p1) if gamma <= p1 => (p1 - gamma) + self.t * (p2 - p1),
            _ => self.t * (p2 - gamma).max(0.0),
        }
    }

    fn payment_per_utility(&self, gamma: f64) -> f64 {
        // Equals the lottery expectation over the two posted prices.
        match self.low_price {
            Some(p1) if gamma <= p1 => (1.0 - self.t) * p1 + self.t * self.high_price,
            _ if gamma <= self.high_price => self.t * self.high_price,
            _ => 0.0,
        }
    }
}

/// One arm of a posted-price lottery; `price = None` is the null offer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LotteryOffer {
    pub price: Option<f64>,
    pub probability: f64,
}

/// Decompose a step rule into a lottery over at most two posted prices:
/// offer `p₂` with probability `t`, else `p₁`. Zero-probability arms are
/// dropped and equal prices merged.
pub fn lottery_decompose(rule: &TwoStepRule) -> Vec<LotteryOffer> {
    let high = LotteryOffer {
        price: Some(rule.high_price),
        probability: rule.t,
    };
    let low = LotteryOffer {
        price: rule.low_price,
        probability: 1.0 - rule.t,
    };
    if low.price == high.price {
        return vec![LotteryOffer {
            price: high.price,
            probability: 1.0,
        }];
    }
    [high, low]
        .into_iter()
        .filter(|o| o.probability > 0.0)
        .collect()
}

/// `(U_f(S), B_f(S))` by direct summation of `f(γ_i)u_i` and `Q_f(γ_i)u_i`.
pub fn rule_totals(rule: &TwoStepRule, sellers: &[Seller]) -> (f64, f64) {
    sellers
        .iter()
        .filter_map(|s| s.gamma().map(|g| (g, s.utility)))
        .fold((0.0, 0.0), |(u, b), (g, w)| {
            (
                u + rule.evaluate(g) * w,
                b + rule.payment_per_utility(g) * w,
            )
        })
}

/// `U_p(S)`: utility of sellers accepting a posted price `p` per utility.
pub fn posted_price_utility(sellers: &[Seller], price: Option<f64>) -> f64 {
    let Some(p) = price else { return 0.0 };
    sellers
        .iter()
        .filter(|s| s.gamma().is_some_and(|g| g <= p))
        .map(|s| s.utility)
        .sum()
}

/// `(U_f(S), B_f(S))` through the lottery identities
/// `U_f = (1−t)U_{p₁} + tU_{p₂}` and `B_p = p·U_p`.
pub fn rule_totals_via_lottery(rule: &TwoStepRule, sellers: &[Seller]) -> (f64, f64) {
    lottery_decompose(rule)
        .into_iter()
        .fold((0.0, 0.0), |(u, b), offer| {
            let accepted = posted_price_utility(sellers, offer.price);
            let price = offer.price.unwrap_or(0.0);
            (
                u + offer.probability * accepted,
                b + offer.probability * price * accepted,
            )
        })
}

/// Per-seller allocation and payment of a mechanism run.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismOutcome {
    pub fractions: Vec<f64>,
    pub payments: Vec<f64>,
    pub total_utility: f64,
    pub total_payment: f64,
}

impl MechanismOutcome {
    pub fn new(market: &Market, fractions: Vec<f64>, payments: Vec<f64>) -> Self {
        debug_assert_eq!(fractions.len(), market.len());
        debug_assert_eq!(payments.len(), market.len());
        let total_utility = fractions
            .iter()
            .zip(market.sellers())
            .map(|(x, s)| x * s.utility)
            .sum();
        let total_payment = payments.iter().sum();
        MechanismOutcome {
            fractions,
            payments,
            total_utility,
            total_payment,
        }
    }

    pub fn empty(market: &Market) -> Self {
        MechanismOutcome::new(market, vec![0.0; market.len()], vec![0.0; market.len()])
    }

    /// Largest shortfall `x_i·c_i − payment_i` over sellers (≤ 0 when IR holds).
    pub fn worst_ir_violation(&self, market: &Market) -> f64 {
        market
            .sellers()
            .iter()
            .zip(self.fractions.iter().zip(&self.payments))
            .map(|(s, (x, p))| x * s.cost - p)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
