//! Abelian base groups: the core-order decision, explicit witnesses for
//! elementary abelian pairs, the power-filtration pipeline producing chief
//! certificates, and the cyclic cover used to reduce to the core.

mod cover;
mod elementary;
mod power;


pub use cover::{check_abprime, cyclic_cover, default_cover_degree, AbPrimeReport, CyclicCoverData};
pub use elementary::{build_witness_elementary, ElementaryWitness, WrappedWitness};
pub use power::{
    abelian_chief_pipeline, assemble_chief, homocyclic_embedding, layer_coordinates, power_filtration,
    unipotent_flag, HomocyclicEmbedding, LayerData, PipelineResult, PowerFiltration,
};

use crate::error::{Error, Result};
use crate::filtrations::Verdict;
use crate::group::Subgroup;
use crate::hnn::{core_fixpoint, HnnPair};

#[derive(Clone, Debug)]
pub struct AbelianDecision {
    pub verdict: Verdict,
    pub core: Subgroup,
    /// Order of `φ` restricted to the core.
    pub order: u64,
    pub r: usize,
}

/// For abelian `G` the extension is residually p exactly when `φ` has
/// p-power order on the core.
pub fn decide_abelian(pair: &HnnPair) -> Result<AbelianDecision> {
    if let Some((x, y)) = pair.group().noncommuting_generators() {
        return Err(Error::NotAbelian(x, y));
    }
    let core = core_fixpoint(pair)?;
    let order = core.automorphism_order();
    let verdict = if core.is_p_power_order() {
        Verdict::ResiduallyP
    } else {
        Verdict::NotResiduallyP
    };
    Ok(AbelianDecision {
        verdict,
        core: core.subgroup,
        order,
        r: core.r,
    })
}

/// Exponent vector of an abelian group built by `Group::abelian`, or an error.
pub(crate) fn exponents_of(pair: &HnnPair) -> Result<Vec<u32>> {
    let g = pair.group();
    if let Some((x, y)) = g.noncommuting_generators() {
        return Err(Error::NotAbelian(x, y));
    }
    g.abelian_exponents()
        .map(<[u32]>::to_vec)
        .ok_or_else(|| Error::Hypothesis("base group must be given as a direct sum of cyclic groups".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn decide_examples() {
        let g = Group::abelian(3, &[1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[1], &[2], None).unwrap();
        let d = decide_abelian(&pair).unwrap();
        assert_eq!(d.verdict, Verdict::NotResiduallyP);
        assert_eq!(d.order, 2);
        let d = decide_abelian(&HnnPair::trivial(&g)).unwrap();
        assert_eq!((d.verdict, d.order), (Verdict::ResiduallyP, 1));
        let nonab = Group::group_ring_semidirect(2, 1).unwrap();
        assert!(matches!(decide_abelian(&HnnPair::trivial(&nonab)), Err(Error::NotAbelian(..))));
    }
}
