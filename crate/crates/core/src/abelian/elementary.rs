use crate::arith::is_p_power;
use crate::error::{Error, Result};
use crate::group::{Elem, Group, GroupMap, Subgroup, DEFAULT_CAP};
use crate::hnn::{semidirect_wrap, HnnPair};
use crate::linalg::{coordinates, Span, Vector};

/// An elementary abelian `X ⊇ G` with an automorphism `γ` of p-power order
/// extending `φ`.
#[derive(Clone, Debug)]
pub struct ElementaryWitness {
    pub x: Group,
    pub gamma: GroupMap,
    /// `G → X`.
    pub embedding: GroupMap,
    /// Dimensions of `A∩B`, `P`, `Q`, `S`.
    pub dim_core: usize,
    pub dim_p: usize,
    pub dim_q: usize,
    pub dim_s: usize,
}

impl ElementaryWitness {
    /// The pair `(X, γ)` with `A = B = X`.
    pub fn target_pair(&self) -> Result<HnnPair> {
        let w = self.gamma.domain().clone();
        HnnPair::new(self.gamma.clone(), &w)
    }

    pub fn gamma_order(&self) -> u64 {
        self.gamma.permutation_order().expect("gamma is an automorphism")
    }

    /// `Y = Z/ord(γ) ⋉ X` with `y` acting as `γ`, the pair `(Y, c_y)` on all
    /// of `Y`, and `G → X ⊆ Y`.
    pub fn wrapped(&self) -> Result<WrappedWitness> {
        let (y_group, y) = semidirect_wrap(&self.x, &self.gamma)?;
        let whole = Subgroup::whole(&y_group, DEFAULT_CAP)?;
        let conj = GroupMap::from_fn(&whole, &y_group, |z| y_group.conj(z, y));
        let pair = HnnPair::new(conj, &whole)?;
        let embedding = GroupMap::from_fn(self.embedding.domain(), &y_group, |g| {
            self.embedding.apply(g).expect("total")
        });
        Ok(WrappedWitness {
            y_group,
            y,
            pair,
            embedding,
        })
    }
}

#[derive(Clone, Debug)]
pub struct WrappedWitness {
    pub y_group: Group,
    pub y: Elem,
    /// `(Y, c_y)` with `A = B = Y`.
    pub pair: HnnPair,
    /// `G → Y`.
    pub embedding: GroupMap,
}

/// Extends `basis` (a list of independent vectors) greedily by members of
/// `candidates` until it spans `target_rank` dimensions; returns the new vectors.
fn greedy_extend(span: &mut Span, candidates: impl Iterator<Item = Vector>, target_rank: usize) -> Vec<Vector> {
    let mut added = Vec::new();
    for v in candidates {
        if span.rank() == target_rank {
            break;
        }
        if span.insert(&v) {
            added.push(v);
        }
    }
    added
}

/// Builds `X = A ⊕ Q ⊕ Q_1 ⊕ ... ⊕ Q_{p-2} ⊕ S` and `γ` for an elementary
/// abelian pair whose `φ` stabilizes `A∩B` with p-power order there.
///
/// `γ` is `φ` on `A`, shifts `Q → Q_1 → ... → Q_{p-2}`, sends `Q_{p-2}`
/// back through `φ^{-1}` (for `p = 2` this happens on `Q` itself) and fixes `S`.
/// Complements are chosen greedily from the sorted elements.
pub fn build_witness_elementary(pair: &HnnPair) -> Result<ElementaryWitness> {
    let g = pair.group();
    let p = g.p();
    let exps = super::exponents_of(pair)?;
    if exps.iter().any(|&e| e != 1) {
        return Err(Error::NotElementaryAbelian);
    }
    let d = exps.len();
    let vec_of = |x: Elem| -> Vector { g.decode(x) };

    let w = pair.a_cap_b();
    let phi_w = pair.phi().image_of(&w)?;
    if phi_w != w {
        return Err(Error::Hypothesis("φ does not map A∩B onto itself".into()));
    }
    let w_order = pair.phi().restrict(&w)?.permutation_order()?;
    if !is_p_power(w_order, p) {
        return Err(Error::OrderNotPPower(w_order));
    }

    let rank = |s: &Subgroup| crate::arith::p_log(s.order(), p).expect("p-group") as usize;
    let (dw, da, db) = (rank(&w), rank(pair.a()), rank(pair.b()));

    let mut span_w = Span::new(d, p);
    let w_basis = greedy_extend(&mut span_w, w.elements().iter().map(|&x| vec_of(x)), dw);
    let mut span_a = span_w.clone();
    let p_basis = greedy_extend(&mut span_a, pair.a().elements().iter().map(|&x| vec_of(x)), da);
    let mut span_b = span_w.clone();
    let q_basis = greedy_extend(&mut span_b, pair.b().elements().iter().map(|&x| vec_of(x)), db);
    let mut span_g = span_a.clone();
    for q in &q_basis {
        span_g.insert(q);
    }
    let dq = q_basis.len();
    let aq_rank = span_g.rank();
    let s_basis = greedy_extend(&mut span_g, (0..g.order()).map(vec_of), d);
    debug_assert_eq!(aq_rank, da + dq);

    // X coordinates: [A (W then P) | Q_0 | Q_1 .. Q_{p-2} | S]
    let q_copies = (p - 1) as usize;
    let dim_x = da + q_copies * dq + s_basis.len();
    let x_group = Group::abelian(p, &vec![1; dim_x])?;
    x_group.elements(DEFAULT_CAP)?;

    let a_basis: Vec<Vector> = w_basis.iter().chain(&p_basis).cloned().collect();
    let g_basis: Vec<Vector> = a_basis.iter().chain(&q_basis).chain(&s_basis).cloned().collect();
    let s_off = da + q_copies * dq;
    let embed_vec = |v: &[u64]| -> Vector {
        let c = coordinates(&g_basis, v, p).expect("A, Q, S span G");
        let mut out = vec![0; dim_x];
        out[..da + dq].copy_from_slice(&c[..da + dq]);
        out[s_off..].copy_from_slice(&c[da + dq..]);
        out
    };
    let encode_x = |v: &[u64]| x_group.encode(v).expect("coordinates are reduced mod p");

    let embedding_table: Vec<Elem> = (0..g.order()).map(|x| encode_x(&embed_vec(&vec_of(x)))).collect();
    let g_whole = Subgroup::whole(g, DEFAULT_CAP)?;
    let embedding = GroupMap::from_fn(&g_whole, &x_group, |x| embedding_table[x as usize]);

    let encode_g = |v: &[u64]| g.encode(v).expect("reduced vector");
    let mut images: Vec<Vector> = Vec::with_capacity(dim_x);
    for a in &a_basis {
        let fa = pair.apply(encode_g(a)).expect("basis vector lies in A");
        images.push(embed_vec(&vec_of(fa)));
    }
    for copy in 0..q_copies {
        for (t, q) in q_basis.iter().enumerate() {
            if copy + 1 < q_copies {
                let mut v = vec![0; dim_x];
                v[da + (copy + 1) * dq + t] = 1;
                images.push(v);
            } else {
                let back = pair.apply_inv(encode_g(q)).expect("basis vector lies in B");
                images.push(embed_vec(&vec_of(back)));
            }
        }
    }
    for t in 0..s_basis.len() {
        let mut v = vec![0; dim_x];
        v[s_off + t] = 1;
        images.push(v);
    }
    let x_whole = Subgroup::whole(&x_group, DEFAULT_CAP)?;
    let gen_images: Vec<Elem> = images.iter().map(|v| encode_x(v)).collect();
    let gamma = GroupMap::from_generator_images(&x_whole, &x_group, x_group.generators(), &gen_images)?;
    gamma.check_injective()?;
    let order = gamma.permutation_order()?;
    if !is_p_power(order, p) {
        return Err(Error::OracleDisagreement(format!(
            "constructed automorphism has order {order}"
        )));
    }
    Ok(ElementaryWitness {
        x: x_group,
        gamma,
        embedding,
        dim_core: dw,
        dim_p: p_basis.len(),
        dim_q: dq,
        dim_s: s_basis.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hnn::pair_embedding_check;

    #[test]
    fn identity_on_whole_group() {
        let g = Group::abelian(3, &[1, 1]).unwrap();
        let w = Subgroup::whole(&g, 9).unwrap();
        let pair = HnnPair::new(GroupMap::identity_on(&w), &w).unwrap();
        let wit = build_witness_elementary(&pair).unwrap();
        assert_eq!(wit.x.order(), 9);
        assert_eq!(wit.gamma_order(), 1);
    }

    #[test]
    fn shared_line_with_identity() {
        // G = F_3^2, A = B = <e1>, φ = id: X = A ⊕ S, order 9
        let g = Group::abelian(3, &[1, 1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[3], &[3], None).unwrap();
        let wit = build_witness_elementary(&pair).unwrap();
        assert_eq!((wit.dim_q, wit.dim_s), (0, 1));
        assert_eq!(wit.x.order(), 9);
        assert_eq!(wit.gamma_order(), 1);
    }

    #[test]
    fn plane_with_shifted_line() {
        // G = F_3^3, A = <e1, e2>, B = <e1, e3>, φ(e1) = e1, φ(e2) = e3
        let g = Group::abelian(3, &[1, 1, 1]).unwrap();
        let (e1, e2, e3) = (9, 3, 1);
        let pair = HnnPair::from_generators(&g, &[e1, e2], &[e1, e3], None).unwrap();
        let wit = build_witness_elementary(&pair).unwrap();
        assert_eq!(wit.x.order(), 81);
        assert_eq!(wit.gamma_order(), 3);
        let target = wit.target_pair().unwrap();
        let report = pair_embedding_check(&wit.embedding, &pair, &target).unwrap();
        assert!(report.ok && report.core_monotone);
        let (y_group, y) = semidirect_wrap(&wit.x, &wit.gamma).unwrap();
        assert_eq!(y_group.order(), 243);
        for x in 0..81 {
            assert_eq!(y_group.conj(x, y), wit.gamma.apply(x).unwrap());
        }
        let w = wit.wrapped().unwrap();
        let report = pair_embedding_check(&w.embedding, &pair, &w.pair).unwrap();
        assert!(report.ok && report.core_monotone);
    }

    #[test]
    fn p_two_sends_q_straight_back() {
        let g = Group::abelian(2, &[1, 1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[2], &[1], None).unwrap();
        let wit = build_witness_elementary(&pair).unwrap();
        assert_eq!(wit.x.order(), 4);
        assert_eq!(wit.gamma_order(), 2);
    }

    #[test]
    fn hypothesis_failures() {
        let g = Group::abelian(3, &[1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[1], &[2], None).unwrap();
        assert_eq!(build_witness_elementary(&pair).unwrap_err(), Error::OrderNotPPower(2));
        let z9 = Group::abelian(3, &[2]).unwrap();
        assert_eq!(
            build_witness_elementary(&HnnPair::trivial(&z9)).unwrap_err(),
            Error::NotElementaryAbelian
        );
    }
}
