//! Filtrations compatible with an HNN pair, and the decision procedures and
//! obstructions built on them.

mod chief;
mod obstruction;
mod sufficient;

use serde::{Deserialize, Serialize};

pub use chief::{decide_chief, decide_chief_with, verify_chief_certificate, ChiefDecision, SearchStats};
pub use obstruction::{
    obstruction_full, obstruction_toplevel, twist_violation, FailureRecord, FullObstruction, Refutation, Violation,
};
pub use sufficient::{sufficient_layerwise, sufficient_quotient, SufficiencyReport};

use crate::group::Filtration;
use crate::hnn::HnnPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ResiduallyP,
    NotResiduallyP,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ResiduallyP => "residually_p",
            Verdict::NotResiduallyP => "not_residually_p",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

pub fn is_central(f: &Filtration) -> bool {
    f.is_central()
}

pub fn is_chief(f: &Filtration) -> bool {
    f.is_chief()
}

/// `φ(A∩G_i) = B∩G_i` for every term.
pub fn is_compatible(pair: &HnnPair, f: &Filtration) -> bool {
    f.terms().iter().all(|t| pair.is_compatible_with(t))
}
