use std::collections::HashMap;

use super::elementary::{build_witness_elementary, ElementaryWitness};
use crate::arith::is_p_power;
use crate::error::{Error, Result};
use crate::filtrations::verify_chief_certificate;
use crate::group::{quotient, Elem, Filtration, Group, GroupMap, Quotient, Subgroup};
use crate::hnn::{pair_embedding_check, HnnPair};
use crate::linalg::{self, Span};

/// `ι: G → (Z/p^k)^d`, generator `i ↦ p^{k - e_i}·unit_i`, and the pair
/// transported along it.
#[derive(Clone, Debug)]
pub struct HomocyclicEmbedding {
    pub h: Group,
    pub k: u32,
    pub iota: GroupMap,
    pub pair: HnnPair,
}

pub fn homocyclic_embedding(pair: &HnnPair, cap: u64) -> Result<HomocyclicEmbedding> {
    let g = pair.group();
    let p = g.p();
    let exps = super::exponents_of(pair)?;
    let k = *exps.iter().max().expect("nonempty");
    let h = Group::abelian(p, &vec![k; exps.len()])?;
    h.elements(cap)?;
    let scale: Vec<u64> = exps.iter().map(|&e| p.pow(k - e)).collect();
    let iota_of = |x: Elem| -> Elem {
        let v: Vec<u64> = g.decode(x).iter().zip(&scale).map(|(a, s)| a * s).collect();
        h.encode(&v).expect("scaled digits stay below p^k")
    };
    let whole = Subgroup::whole(g, cap)?;
    let iota = GroupMap::from_fn(&whole, &h, iota_of);
    iota.check_homomorphism()?;
    iota.check_injective()?;
    let a_h = iota.image_of(pair.a())?;
    let b_h = iota.image_of(pair.b())?;
    let mut table: Vec<(Elem, Elem)> = pair
        .phi()
        .pairs()
        .map(|(x, y)| (iota_of(x), iota_of(y)))
        .collect();
    table.sort_unstable();
    let psi = GroupMap::from_fn(&a_h, &h, |x| {
        table[table.binary_search_by_key(&x, |e| e.0).expect("x in ι(A)")].1
    });
    let moved = HnnPair::new(psi, &b_h)?;
    Ok(HomocyclicEmbedding {
        h,
        k,
        iota,
        pair: moved,
    })
}

/// Coordinates in `F_p^d` of `x ∈ p^{i-1}H` modulo `p^i H`: digit `j` is
/// `x_j / p^{i-1} mod p`.
pub fn layer_coordinates(h: &Group, i: u32, x: Elem) -> Vec<u64> {
    let p = h.p();
    let scale = p.pow(i - 1);
    h.decode(x).iter().map(|&v| (v / scale) % p).collect()
}

/// One layer `L_i = G_i/G_{i+1}` of the power filtration, realized on
/// `E = F_p^d` through [`layer_coordinates`]. In these coordinates the
/// isomorphism `L_i → G_k`, `g ↦ p^{k-i} g`, is the identity.
#[derive(Clone, Debug)]
pub struct LayerData {
    pub index: u32,
    pub pair: HnnPair,
}

#[derive(Clone, Debug)]
pub struct PowerFiltration {
    /// `G_i = p^{i-1} H` for `i = 1..=k+1`.
    pub filtration: Filtration,
    pub k: u32,
    pub e: Group,
    pub layers: Vec<LayerData>,
}

/// Power filtration of a pair on a homocyclic group `(Z/p^k)^d`, with the
/// induced layer pairs and the checks that every layer embeds into the last.
pub fn power_filtration(pair: &HnnPair) -> Result<PowerFiltration> {
    let h = pair.group();
    let p = h.p();
    let exps = super::exponents_of(pair)?;
    let k = exps[0];
    if exps.iter().any(|&e| e != k) {
        return Err(Error::Hypothesis("power filtration needs a homocyclic group".into()));
    }
    let d = exps.len();
    let mut terms = Vec::with_capacity(k as usize + 1);
    for i in 1..=k + 1 {
        let step = p.pow(i - 1);
        let gens: Vec<Elem> = h.generators().iter().map(|&x| h.pow(x, step)).collect();
        terms.push(Subgroup::generated(h, &gens)?);
    }
    let filtration = Filtration::new(terms)?;
    for (idx, t) in filtration.terms().iter().enumerate() {
        if let Some(w) = pair.compatibility_witness(t) {
            return Err(Error::OracleDisagreement(format!(
                "power filtration term {} is not compatible (witness {w})",
                idx + 1
            )));
        }
    }
    let e = Group::abelian(p, &vec![1; d])?;
    let mut layers = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let gi = filtration.term(i as usize);
        let enc = |x: Elem| e.encode(&layer_coordinates(h, i, x)).expect("digits below p");
        let mut table: HashMap<Elem, Elem> = HashMap::new();
        for &a in pair.a().intersect(&gi).elements() {
            let (u, v) = (enc(a), enc(pair.apply(a).expect("in A")));
            if table.insert(u, v).is_some_and(|prev| prev != v) {
                return Err(Error::IllDefinedMap(a));
            }
        }
        let mut entries: Vec<(Elem, Elem)> = table.into_iter().collect();
        entries.sort_unstable();
        let dom = Subgroup::generated(&e, &entries.iter().map(|x| x.0).collect::<Vec<_>>())?;
        if dom.order() != entries.len() as u64 {
            return Err(Error::OracleDisagreement("layer domain is not a subgroup".into()));
        }
        let phi = GroupMap::from_fn(&dom, &e, |x| entries[entries.binary_search_by_key(&x, |t| t.0).unwrap()].1);
        let b = phi.image();
        layers.push(LayerData {
            index: i,
            pair: HnnPair::new(phi, &b)?,
        });
    }
    let last = &layers[k as usize - 1].pair;
    let id = GroupMap::identity_on(&Subgroup::whole(&e, u64::MAX)?);
    for layer in &layers {
        let report = pair_embedding_check(&id, &layer.pair, last)?;
        if !report.ok {
            return Err(Error::OracleDisagreement(format!(
                "layer {} does not embed into layer {k}",
                layer.index
            )));
        }
    }
    Ok(PowerFiltration {
        filtration,
        k,
        e,
        layers,
    })
}

/// A complete flag `X = F_D ⊋ ... ⊋ F_0 = 0` with `γ(v) - v ∈ F_{t-1}` for
/// `v ∈ F_t`, refining the kernels of the powers of `γ - id`.
pub fn unipotent_flag(x: &Group, gamma: &GroupMap) -> Result<Filtration> {
    let p = x.p();
    let exps = x.abelian_exponents().ok_or(Error::NotElementaryAbelian)?;
    if exps.iter().any(|&e| e != 1) {
        return Err(Error::NotElementaryAbelian);
    }
    let d = exps.len();
    if !gamma.domain().is_whole() || !gamma.codomain().same(x) {
        return Err(Error::NotAutomorphism);
    }
    let cols: Vec<Vec<u64>> = x
        .generators()
        .iter()
        .map(|&g| x.decode(gamma.apply(g).expect("total")))
        .collect();
    let n = linalg::mat_sub_identity(&linalg::from_columns(&cols, d), p);
    let mut power = linalg::identity(d);
    let mut flag_vectors: Vec<Vec<u64>> = Vec::new();
    let mut span = Span::new(d, p);
    for _ in 0..=d {
        if span.rank() == d {
            break;
        }
        power = linalg::mat_mul(&power, &n, p);
        // kernel of the current power, extended greedily over sorted elements
        for v in (0..x.order()).map(|c| x.decode(c)) {
            if linalg::mat_vec(&power, &v, p).iter().all(|&c| c == 0) && span.insert(&v) {
                flag_vectors.push(v);
            }
        }
    }
    if span.rank() < d {
        let order = gamma.permutation_order()?;
        return Err(Error::OrderNotPPower(order));
    }
    let mut terms = Vec::with_capacity(d + 1);
    for t in (0..=d).rev() {
        let gens: Vec<Elem> = flag_vectors[..t].iter().map(|v| x.encode(v).expect("reduced")).collect();
        terms.push(Subgroup::generated(x, &gens)?);
    }
    Filtration::new(terms)
}

/// Interleaves per-layer flags into a chief filtration of `G`.
///
/// `layer_flags[i-1]` holds `G/G_{i+1}` and a descending chain of its
/// subgroups from the image of `G_i` down to the trivial group; each term is
/// pulled back to `G`. The result is checked with the chief-certificate verifier.
pub fn assemble_chief(pair: &HnnPair, f: &Filtration, layer_flags: &[(Quotient, Vec<Subgroup>)]) -> Result<Filtration> {
    if layer_flags.len() + 1 != f.len() {
        return Err(Error::InvalidParameters(format!(
            "expected {} layer flags, got {}",
            f.len() - 1,
            layer_flags.len()
        )));
    }
    let mut terms: Vec<Subgroup> = Vec::new();
    for (idx, (q, flag)) in layer_flags.iter().enumerate() {
        let i = idx + 1;
        if q.kernel != f.term(i + 1) {
            return Err(Error::InvalidFiltration(format!("quotient for layer {i} has the wrong kernel")));
        }
        let mut pulled = Vec::with_capacity(flag.len());
        for h in flag {
            if !h.group().same(&q.group) {
                return Err(Error::AmbientMismatch);
            }
            pulled.push(q.preimage(h));
        }
        if pulled.first() != Some(&f.term(i)) || pulled.last() != Some(&f.term(i + 1)) {
            return Err(Error::InvalidFiltration(format!("flag for layer {i} does not span the layer")));
        }
        for t in pulled {
            if terms.last() != Some(&t) {
                terms.push(t);
            }
        }
    }
    let chief = Filtration::new(terms)?;
    verify_chief_certificate(pair, &chief)?;
    Ok(chief)
}

/// Everything produced by the abelian chief pipeline.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub embedding: HomocyclicEmbedding,
    pub power: PowerFiltration,
    pub witness: ElementaryWitness,
    /// Chief filtration of the homocyclic group.
    pub homocyclic_chief: Filtration,
    /// Chief filtration of the original group, checked against the pair.
    pub chief: Filtration,
}

/// Chief certificate for an abelian pair whose `φ` restricts to a p-power
/// order automorphism of `A∩B`: embed into a homocyclic group, take the
/// power filtration, embed the last layer into `(X, γ)`, pull a unipotent
/// flag of `γ` back to every layer, interleave, and intersect with `G`.
pub fn abelian_chief_pipeline(pair: &HnnPair, cap: u64) -> Result<PipelineResult> {
    let p = pair.p();
    let w = pair.a_cap_b();
    if pair.phi().image_of(&w)? != w {
        return Err(Error::Hypothesis("φ does not map A∩B onto itself".into()));
    }
    let order = pair.phi().restrict(&w)?.permutation_order()?;
    if !is_p_power(order, p) {
        return Err(Error::OrderNotPPower(order));
    }
    let embedding = homocyclic_embedding(pair, cap)?;
    let power = power_filtration(&embedding.pair)?;
    let last = &power.layers[power.k as usize - 1].pair;
    let witness = build_witness_elementary(last)?;
    let flag = unipotent_flag(&witness.x, &witness.gamma)?;
    // pull the flag back to E, dropping repeats
    let mut e_flag: Vec<Subgroup> = Vec::new();
    for t in flag.terms() {
        let pre = witness.embedding.preimage(t);
        if e_flag.last() != Some(&pre) {
            e_flag.push(pre);
        }
    }
    let h = &embedding.h;
    let f = &power.filtration;
    let mut layer_flags = Vec::with_capacity(power.k as usize);
    for i in 1..=power.k {
        let gi = f.term(i as usize);
        let q = quotient(&f.term(i as usize + 1), cap)?;
        let coords: Vec<(Elem, Elem)> = gi
            .elements()
            .iter()
            .map(|&x| (x, power.e.encode(&layer_coordinates(h, i, x)).expect("digits below p")))
            .collect();
        let mut chain = Vec::with_capacity(e_flag.len());
        for v in &e_flag {
            let members: Vec<Elem> = coords.iter().filter(|c| v.contains(c.1)).map(|c| c.0).collect();
            let sub = Subgroup::generated(h, &members)?;
            chain.push(q.image(&sub));
        }
        layer_flags.push((q, chain));
    }
    let homocyclic_chief = assemble_chief(&embedding.pair, f, &layer_flags)?;
    // intersect with ι(G) and pull back
    let inv = embedding.iota.inverse()?;
    let image = embedding.iota.image();
    let mut terms: Vec<Subgroup> = Vec::new();
    for t in homocyclic_chief.terms() {
        let back = inv.image_of(&t.intersect(&image))?;
        if terms.last() != Some(&back) {
            terms.push(back);
        }
    }
    let chief = Filtration::new(terms)?;
    verify_chief_certificate(pair, &chief)?;
    Ok(PipelineResult {
        embedding,
        power,
        witness,
        homocyclic_chief,
        chief,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    #[test]
    fn z9_identity_pipeline() {
        let g = Group::abelian(3, &[2]).unwrap();
        let w = Subgroup::whole(&g, 9).unwrap();
        let pair = HnnPair::new(GroupMap::identity_on(&w), &w).unwrap();
        let pf = power_filtration(&pair).unwrap();
        let orders: Vec<u64> = pf.filtration.terms().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![9, 3, 1]);
        assert_eq!(pf.layers.len(), 2);
        let res = abelian_chief_pipeline(&pair, DEFAULT_CAP).unwrap();
        assert_eq!(res.chief.len(), 3);
    }

    #[test]
    fn unipotent_flag_of_shear() {
        let x = Group::abelian(3, &[1, 1]).unwrap();
        let w = Subgroup::whole(&x, 9).unwrap();
        // e1 = (1,0) = 3 fixed, e2 = (0,1) = 1 -> e1 + e2 = 4
        let gamma = GroupMap::from_generator_images(&w, &x, &[3, 1], &[3, 4]).unwrap();
        let f = unipotent_flag(&x, &gamma).unwrap();
        assert_eq!(f.terms()[1], Subgroup::generated(&x, &[3]).unwrap());
        let swap = GroupMap::from_generator_images(&w, &x, &[3, 1], &[6, 1]).unwrap();
        assert_eq!(unipotent_flag(&x, &swap).unwrap_err(), Error::OrderNotPPower(2));
    }

    #[test]
    fn mixed_exponents_embed() {
        // Z/9 ⊕ Z/3 with A = B = G, φ fixing (1,0) and sending (0,1) to (3,1)
        let g = Group::abelian(3, &[2, 1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[3, 1], &[3, 10], None).unwrap();
        let res = abelian_chief_pipeline(&pair, DEFAULT_CAP).unwrap();
        assert_eq!(res.embedding.h.order(), 81);
        assert_eq!(res.chief.len(), 4);
    }
}
