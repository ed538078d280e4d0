//! The four uniform mechanisms under study.

mod agn;
mod cutoff;
mod greedy;
mod rs_greedy;

use std::fmt;
use std::str::FromStr;

pub use agn::{agn, AgnRule, AgnRun};
pub use cutoff::{cutoff, CutoffRun};
pub use greedy::{
    greedy, greedy_reference, step_candidates, GreedyLadder, GreedyRun, GreedyStepCandidate,
};
pub use rs_greedy::{rs_greedy, RsGreedyParams};

use crate::error::{Error, Result};
use crate::market::{Market, MechanismOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MechanismKind {
    Cutoff,
    Agn,
    Greedy,
    RsGreedy,
}

impl MechanismKind {
    /// Column order of the synthetic-market table.
    pub const ALL: [MechanismKind; 4] = [
        MechanismKind::Cutoff,
        MechanismKind::Agn,
        MechanismKind::Greedy,
        MechanismKind::RsGreedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Cutoff => "cutoff",
            MechanismKind::Agn => "agn",
            MechanismKind::Greedy => "greedy",
            MechanismKind::RsGreedy => "rs_greedy",
        }
    }

    /// Run the mechanism. Only RS-Greedy consumes `rs_params` (and its seed).
    pub fn run(
        self,
        market: &Market,
        budget: f64,
        rs_params: &RsGreedyParams,
    ) -> Result<MechanismOutcome> {
        Ok(match self {
            MechanismKind::Cutoff => cutoff(market, budget)?.outcome,
            MechanismKind::Agn => agn(market, budget)?.outcome,
            MechanismKind::Greedy => greedy(market, budget)?.outcome,
            MechanismKind::RsGreedy => rs_greedy(market, budget, rs_params)?,
        })
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "cutoff" => Ok(MechanismKind::Cutoff),
            "agn" => Ok(MechanismKind::Agn),
            "greedy" => Ok(MechanismKind::Greedy),
            "rs_greedy" | "rsgreedy" => Ok(MechanismKind::RsGreedy),
            other => Err(Error::param(format!("unknown mechanism `{other}`"))),
        }
    }
}

pub(crate) fn check_budget(budget: f64) -> Result<f64> {
    if budget.is_finite() && budget >= 0.0 {
        Ok(budget)
    } else {
        Err(Error::param(format!(
            "budget {budget} must be finite and >= 0"
        )))
    }
}
