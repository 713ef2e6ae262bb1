use serde::Serialize;

use crate::arith::is_p_power;
use crate::error::{Error, Result};
use crate::group::{quotient, Filtration};
use crate::hnn::{core_fixpoint, induced_pair_in, HnnPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SufficiencyReport {
    pub holds: bool,
    /// Order of the induced automorphism on each examined core.
    pub orders: Vec<u64>,
    pub core_orders: Vec<u64>,
}

fn check_hypotheses(pair: &HnnPair, f: &Filtration) -> Result<()> {
    if !f.group().same(pair.group()) {
        return Err(Error::AmbientMismatch);
    }
    if !f.is_central() {
        return Err(Error::Hypothesis("filtration is not central".into()));
    }
    for t in f.terms() {
        if let Some(w) = pair.compatibility_witness(t) {
            return Err(Error::Incompatible(w));
        }
    }
    Ok(())
}

/// Layer criterion: each `φ_{i,i+1}` has p-power order on
/// `H(G_i/G_{i+1}, φ_{i,i+1})`. When it holds the extension is residually p.
pub fn sufficient_layerwise(pair: &HnnPair, f: &Filtration, cap: u64) -> Result<SufficiencyReport> {
    check_hypotheses(pair, f)?;
    let p = pair.p();
    let mut orders = Vec::new();
    let mut core_orders = Vec::new();
    for i in 1..f.len() {
        let q = quotient(&f.term(i + 1), cap)?;
        let layer = induced_pair_in(pair, &pair.a().intersect(&f.term(i)), &q)?;
        let core = core_fixpoint(&layer)?;
        orders.push(core.automorphism_order());
        core_orders.push(core.order());
    }
    Ok(SufficiencyReport {
        holds: orders.iter().all(|&o| is_p_power(o, p)),
        orders,
        core_orders,
    })
}

/// Quotient criterion: each `φ_i` has p-power order on `H(G/G_i, φ_i)`.
///
/// Also confirms that every layer core sits inside the corresponding
/// quotient core, which makes this criterion imply the layer one.
pub fn sufficient_quotient(pair: &HnnPair, f: &Filtration, cap: u64) -> Result<SufficiencyReport> {
    check_hypotheses(pair, f)?;
    let p = pair.p();
    let mut orders = Vec::new();
    let mut core_orders = Vec::new();
    for i in 2..=f.len() {
        let q = quotient(&f.term(i), cap)?;
        let whole_core = core_fixpoint(&induced_pair_in(pair, pair.a(), &q)?)?;
        let layer_core = core_fixpoint(&induced_pair_in(pair, &pair.a().intersect(&f.term(i - 1)), &q)?)?;
        if !layer_core.subgroup.is_subset(&whole_core.subgroup) {
            return Err(Error::OracleDisagreement(format!(
                "layer core at {} is not inside the quotient core",
                i - 1
            )));
        }
        orders.push(whole_core.automorphism_order());
        core_orders.push(whole_core.order());
    }
    Ok(SufficiencyReport {
        holds: orders.iter().all(|&o| is_p_power(o, p)),
        orders,
        core_orders,
    })
}
