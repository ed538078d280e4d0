use crate::error::Result;
use crate::market::{Market, MechanismOutcome};

use super::check_budget;

#[derive(Debug, Clone)]
pub struct CutoffRun {
    pub price: f64,
    pub outcome: MechanismOutcome,
}

/// Best single posted price, with the marginal price level rationed.
///
/// At price `γ_j` every seller with `γ < γ_j` is bought in full and the level
/// at `γ_j` (indifferent sellers) absorbs whatever budget is left. The chosen
/// price maximises utility; ties go to the lower price.
pub fn cutoff(market: &Market, budget: f64) -> Result<CutoffRun> {
    let budget = check_budget(budget)?;
    let levels = market.price_levels();

    // (price, level index, fraction of that level)
    let mut best: (f64, Option<usize>, f64) = (0.0, None, 0.0);
    let mut best_utility = levels.zero_cost_utility();
    let mut below = 0.0;
    for (k, level) in levels.levels.iter().enumerate() {
        let p = level.gamma;
        if p == 0.0 {
            below += level.utility;
            best = (0.0, Some(k), 1.0);
            continue;
        }
        if p * below > budget {
            break;
        }
        let (utility, fraction) = if p * (below + level.utility) <= budget {
            (below + level.utility, 1.0)
        } else {
            let bought = budget / p;
            (bought, (bought - below) / level.utility)
        };
        if utility > best_utility {
            best_utility = utility;
            best = (p, Some(k), fraction);
        }
        below += level.utility;
    }

    let (price, marginal, fraction) = best;
    let mut fractions = vec![0.0; market.len()];
    let mut payments = vec![0.0; market.len()];
    if let Some(top) = marginal {
        for (k, level) in levels.levels.iter().enumerate().take(top + 1) {
            let x = if k == top { fraction } else { 1.0 };
            for &i in &level.members {
                fractions[i] = x;
                payments[i] = x * price * market.sellers()[i].utility;
            }
        }
    }
    Ok(CutoffRun {
        price,
        outcome: MechanismOutcome::new(market, fractions, payments),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::competitive_ratio;

    #[test]
    fn half_free_market_ratio_half() {
        let n = 40;
        let m =
            Market::from_pairs((0..n).map(|k| (if k < n / 2 { 0.0 } else { 1.0 }, 1.0))).unwrap();
        let run = cutoff(&m, n as f64 / 2.0).unwrap();
        assert!((competitive_ratio(&run.outcome, &m, n as f64 / 2.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_price_extracts_everything() {
        let m = Market::uniform(30, 1.0).unwrap();
        let run = cutoff(&m, 30.0).unwrap();
        assert_eq!(run.price, 1.0);
        assert_eq!(competitive_ratio(&run.outcome, &m, 30.0), 1.0);
    }

    #[test]
    fn two_seller_candidates() {
        let m = Market::from_pairs([(1.0, 1.0), (2.0, 1.0)]).unwrap();
        let run = cutoff(&m, 2.0).unwrap();
        assert_eq!(run.price, 1.0);
        assert_eq!(run.outcome.total_utility, 1.0);
        assert_eq!(run.outcome.total_payment, 1.0);
    }

    #[test]
    fn rationed_marginal_level() {
        let m = Market::from_pairs([(1.0, 1.0), (3.0, 1.0), (3.0, 1.0)]).unwrap();
        // Price 3: item 1 costs 3, leaving 3 for 1 unit split over the γ=3 level.
        let run = cutoff(&m, 6.0).unwrap();
        assert_eq!(run.price, 3.0);
        assert_eq!(run.outcome.total_utility, 2.0);
        assert_eq!(run.outcome.fractions, vec![1.0, 0.5, 0.5]);
        assert_eq!(run.outcome.total_payment, 6.0);
    }
}
