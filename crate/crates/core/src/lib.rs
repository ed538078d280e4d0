//! Budget-feasible procurement mechanisms under a small-bidder assumption.
//!
//! The crate is organised around a handful of modules:
//!
//! * [`market`] holds the seller/market data model, step allocation rules and
//!   Myerson payments.
//! * [`knapsack`] computes the non-IC (public cost) fractional optimum that every
//!   competitive ratio is measured against.
//! * [`mechanisms`] implements Greedy, Random-Sampling-Greedy, AGN and the best
//!   cutoff clock auction.
//! * [`instances`] generates synthetic, adversarial and Bayesian markets.
//! * [`smoothed`] evaluates and minimises the budget-smoothed ratio program over
//!   piecewise-linear worst-case curves.
//! * [`bench`] is the seeded Monte-Carlo harness producing the ratio tables.
//! * [`verify`] bundles the fast invariant suite used by `procure verify`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod instances;
pub mod knapsack;
pub mod market;
pub mod mechanisms;
pub mod rng;
pub mod smoothed;
pub mod verify;

pub use error::{Error, Result};
pub use knapsack::{competitive_ratio, non_ic_optimum, KnapsackSolution};
pub use market::{
    lottery_decompose, myerson_payment, rule_totals, AllocationRule, LotteryOffer, Market,
    MechanismOutcome, Seller, TwoStepRule,
};
pub use mechanisms::{agn, cutoff, greedy, rs_greedy, AgnRule, MechanismKind, RsGreedyParams};
