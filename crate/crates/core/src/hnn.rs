//! HNN pairs `(G, φ: A → B)`, their core, induced and twisted pairs, and
//! embeddings of pairs.

use std::collections::HashMap;

use crate::arith::is_p_power;
use crate::error::{Error, Result};
use crate::group::{quotient, Elem, Filtration, Group, GroupMap, Quotient, Subgroup};

/// An isomorphism `φ: A → B` between subgroups of a group `G`.
#[derive(Clone, Debug)]
pub struct HnnPair {
    a: Subgroup,
    b: Subgroup,
    phi: GroupMap,
    phi_inv: GroupMap,
}

impl HnnPair {
    /// Validates `phi` as an isomorphism from its domain onto `b`.
    pub fn new(phi: GroupMap, b: &Subgroup) -> Result<HnnPair> {
        let a = phi.domain().clone();
        if !a.group().same(phi.codomain()) || !b.group().same(a.group()) {
            return Err(Error::AmbientMismatch);
        }
        phi.check_homomorphism()?;
        phi.check_injective()?;
        if phi.image() != *b {
            return Err(Error::NotSurjective);
        }
        let phi_inv = phi.inverse()?;
        Ok(HnnPair {
            a,
            b: b.clone(),
            phi,
            phi_inv,
        })
    }

    /// `A = ⟨a_gens⟩`, `φ` determined by the images of `a_gens`, `B` its image.
    /// When `b_gens` is given, `⟨b_gens⟩` must equal the image.
    pub fn from_generators(
        g: &Group,
        a_gens: &[Elem],
        images: &[Elem],
        b_gens: Option<&[Elem]>,
    ) -> Result<HnnPair> {
        let a = Subgroup::generated(g, a_gens)?;
        let phi = GroupMap::from_generator_images(&a, g, a_gens, images)?;
        let b = match b_gens {
            Some(gens) => Subgroup::generated(g, gens)?,
            None => phi.image(),
        };
        HnnPair::new(phi, &b)
    }

    /// `A = B = {1}`.
    pub fn trivial(g: &Group) -> HnnPair {
        let t = Subgroup::trivial(g);
        let id = GroupMap::identity_on(&t);
        HnnPair {
            a: t.clone(),
            b: t,
            phi: id.clone(),
            phi_inv: id,
        }
    }

    fn from_parts_unchecked(phi: GroupMap) -> HnnPair {
        let phi_inv = phi.inverse().expect("injective by construction");
        HnnPair {
            a: phi.domain().clone(),
            b: phi_inv.domain().clone(),
            phi,
            phi_inv,
        }
    }

    pub fn group(&self) -> &Group {
        self.a.group()
    }

    pub fn p(&self) -> u64 {
        self.group().p()
    }

    pub fn a(&self) -> &Subgroup {
        &self.a
    }

    pub fn b(&self) -> &Subgroup {
        &self.b
    }

    pub fn phi(&self) -> &GroupMap {
        &self.phi
    }

    pub fn phi_inv(&self) -> &GroupMap {
        &self.phi_inv
    }

    pub fn apply(&self, x: Elem) -> Option<Elem> {
        self.phi.apply(x)
    }

    pub fn apply_inv(&self, x: Elem) -> Option<Elem> {
        self.phi_inv.apply(x)
    }

    pub fn a_cap_b(&self) -> Subgroup {
        self.a.intersect(&self.b)
    }

    /// Whether `φ(A∩N) = B∩N`; on failure returns an element of the
    /// symmetric difference as witness.
    pub fn compatibility_witness(&self, n: &Subgroup) -> Option<Elem> {
        let an = self.a.intersect(n);
        let bn = self.b.intersect(n);
        for &x in an.elements() {
            let y = self.phi.apply(x).expect("in A");
            if !bn.contains(y) {
                return Some(x);
            }
        }
        if an.order() != bn.order() {
            return bn
                .elements()
                .iter()
                .copied()
                .find(|&y| !an.contains(self.phi_inv.apply(y).expect("in B")));
        }
        None
    }

    pub fn is_compatible_with(&self, n: &Subgroup) -> bool {
        self.compatibility_witness(n).is_none()
    }
}

/// The core `H(G, φ)`: the largest subgroup mapped onto itself by `φ`.
#[derive(Clone, Debug)]
pub struct Core {
    pub subgroup: Subgroup,
    /// Stabilization index of the iteration that produced the core.
    pub r: usize,
    /// The iterates, starting from the initial one, ending with the core.
    pub chain: Vec<Subgroup>,
    /// `φ` restricted to the core.
    pub restricted: GroupMap,
}

impl Core {
    pub fn order(&self) -> u64 {
        self.subgroup.order()
    }

    /// Order of `φ|_H` as an automorphism.
    pub fn automorphism_order(&self) -> u64 {
        self.restricted
            .permutation_order()
            .expect("φ maps the core onto itself")
    }

    pub fn is_p_power_order(&self) -> bool {
        is_p_power(self.automorphism_order(), self.subgroup.group().p())
    }
}

fn restrict_to_core(pair: &HnnPair, h: &Subgroup) -> Result<GroupMap> {
    let restricted = pair.phi().restrict(h)?;
    if restricted.image() != *h {
        return Err(Error::OracleDisagreement(
            "core is not mapped onto itself".into(),
        ));
    }
    Ok(restricted)
}

/// `H_0 = A∩B`, `H_{i+1} = φ^{-1}(H_i) ∩ H_i ∩ φ(H_i)` until it stabilizes.
pub fn core_fixpoint(pair: &HnnPair) -> Result<Core> {
    let mut h = pair.a_cap_b();
    let mut chain = vec![h.clone()];
    loop {
        let back = pair.phi().preimage(&h);
        let fwd = pair.phi().image_of(&h)?;
        let next = back.intersect(&h).intersect(&fwd);
        if next == h {
            break;
        }
        chain.push(next.clone());
        h = next;
    }
    let r = chain.len() - 1;
    let restricted = restrict_to_core(pair, &h)?;
    Ok(Core {
        subgroup: h,
        r,
        chain,
        restricted,
    })
}

/// The orbit description: `H'_s = {g : φ^j(g) defined for j = 0..s}`,
/// iterated from `H'_1 = A` until stable. The returned `r` is the least `s`
/// with `H'_s = H'_{s+1}`, where `H'_0 = G`.
///
/// The result is cross-checked against [`core_fixpoint`].
pub fn core_orbit(pair: &HnnPair) -> Result<Core> {
    let mut h = pair.a().clone();
    let mut chain = vec![h.clone()];
    let mut r = if h.is_whole() { 0 } else { 1 };
    loop {
        let next = pair.phi().preimage(&h);
        if next == h {
            break;
        }
        chain.push(next.clone());
        h = next;
        r += 1;
    }
    if r == 0 {
        chain.truncate(1);
    }
    let fix = core_fixpoint(pair)?;
    if fix.subgroup != h {
        return Err(Error::OracleDisagreement(format!(
            "fixpoint core has order {}, orbit core has order {}",
            fix.subgroup.order(),
            h.order()
        )));
    }
    let restricted = restrict_to_core(pair, &h)?;
    Ok(Core {
        subgroup: h,
        r,
        chain,
        restricted,
    })
}

/// The pair induced on `G/N` when `φ(A∩N) = B∩N`.
#[derive(Clone, Debug)]
pub struct InducedPair {
    pub pair: HnnPair,
    pub quotient: Quotient,
}

/// Pair `(G/N, AN/N, BN/N, φ̄)`.
pub fn induced_pair(pair: &HnnPair, n: &Subgroup, cap: u64) -> Result<InducedPair> {
    if let Some(w) = pair.compatibility_witness(n) {
        return Err(Error::Incompatible(w));
    }
    let q = quotient(n, cap)?;
    let p = induced_pair_in(pair, pair.a(), &q)?;
    Ok(InducedPair { pair: p, quotient: q })
}

/// Pair induced by `φ` restricted to `dom ⊆ A`, on the quotient `q`
/// (requires `φ(dom)` to be compatible with the kernel of `q`).
pub fn induced_pair_in(pair: &HnnPair, dom: &Subgroup, q: &Quotient) -> Result<HnnPair> {
    let mut table: HashMap<Elem, Elem> = HashMap::new();
    for &x in dom.elements() {
        let (qx, qy) = (q.project(x), q.project(pair.apply(x).expect("in A")));
        match table.insert(qx, qy) {
            Some(prev) if prev != qy => return Err(Error::IllDefinedMap(x)),
            _ => {}
        }
    }
    let mut entries: Vec<(Elem, Elem)> = table.into_iter().collect();
    entries.sort_unstable();
    let qa = Subgroup::from_sorted(&q.group, entries.iter().map(|e| e.0).collect());
    let phi = GroupMap::from_table(&qa, &q.group, entries.iter().map(|e| e.1).collect());
    phi.check_injective()?;
    Ok(HnnPair::from_parts_unchecked(phi))
}

/// The layer pair `φ_ij: (A∩G_i)G_j/G_j → (B∩G_i)G_j/G_j`, realized inside
/// `G/G_j` (1-based indices, `i < j`). Returns the pair together with the
/// quotient and the image of `G_i`.
#[derive(Clone, Debug)]
pub struct LayerPair {
    pub pair: HnnPair,
    pub quotient: Quotient,
    /// `G_i/G_j` inside the quotient.
    pub layer: Subgroup,
}

pub fn induced_layer_pair(pair: &HnnPair, f: &Filtration, i: usize, j: usize, cap: u64) -> Result<LayerPair> {
    if !(1 <= i && i < j) {
        return Err(Error::InvalidParameters(format!("layer indices must satisfy 1 <= i < j, got ({i}, {j})")));
    }
    let gi = f.term(i);
    let gj = f.term(j);
    for k in [i, j] {
        if let Some(w) = pair.compatibility_witness(&f.term(k)) {
            return Err(Error::Incompatible(w));
        }
    }
    let q = quotient(&gj, cap)?;
    let dom = pair.a().intersect(&gi);
    let lp = induced_pair_in(pair, &dom, &q)?;
    let layer = q.image(&gi);
    Ok(LayerPair {
        pair: lp,
        quotient: q,
        layer,
    })
}

/// `c_b ∘ φ ∘ c_a` for `a ∈ A`, `b ∈ B`, with `c_g(x) = g^{-1} x g`.
pub fn twisted_pair(pair: &HnnPair, a: Elem, b: Elem) -> Result<HnnPair> {
    if !pair.a().contains(a) {
        return Err(Error::NotInSubgroup(a));
    }
    if !pair.b().contains(b) {
        return Err(Error::NotInSubgroup(b));
    }
    let g = pair.group();
    let mut images = Vec::with_capacity(pair.a().elements().len());
    for &x in pair.a().elements() {
        let y = pair.apply(g.conj(x, a)).ok_or(Error::NotInSubgroup(x))?;
        images.push(g.conj(y, b));
    }
    let phi = GroupMap::from_table(pair.a(), g, images);
    let out = HnnPair::from_parts_unchecked(phi);
    if out.b() != pair.b() {
        return Err(Error::NotSurjective);
    }
    Ok(out)
}

/// Outcome of checking that `α` embeds one pair into another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub ok: bool,
    /// First element of `A` (or of the domain) at which a condition fails.
    pub counterexample: Option<Elem>,
    /// `α(H(src)) ⊆ H(dst)`; only meaningful when `ok`.
    pub core_monotone: bool,
}

/// Checks `α(A) ⊆ A'`, `α(B) ⊆ B'` and `φ'∘α = α∘φ` on `A`, with `α`
/// injective and multiplicative.
pub fn pair_embedding_check(alpha: &GroupMap, src: &HnnPair, dst: &HnnPair) -> Result<EmbeddingReport> {
    let fail = |x| EmbeddingReport {
        ok: false,
        counterexample: Some(x),
        core_monotone: false,
    };
    if !alpha.codomain().same(dst.group()) {
        return Err(Error::AmbientMismatch);
    }
    if let Err(e) = alpha.check_homomorphism().and_then(|_| alpha.check_injective()) {
        let x = match e {
            Error::NotHomomorphism { x, .. } | Error::NotInjective(x, _) => x,
            _ => 0,
        };
        return Ok(fail(x));
    }
    for &x in src.a().elements() {
        let Some(ax) = alpha.apply(x) else { return Ok(fail(x)) };
        let Some(apx) = alpha.apply(src.apply(x).expect("in A")) else {
            return Ok(fail(x));
        };
        if !dst.a().contains(ax) || dst.apply(ax) != Some(apx) {
            return Ok(fail(x));
        }
    }
    for &x in src.b().elements() {
        if !alpha.apply(x).is_some_and(|y| dst.b().contains(y)) {
            return Ok(fail(x));
        }
    }
    let hs = core_fixpoint(src)?;
    let hd = core_fixpoint(dst)?;
    let core_monotone = alpha.image_of(&hs.subgroup)?.is_subset(&hd.subgroup);
    Ok(EmbeddingReport {
        ok: true,
        counterexample: None,
        core_monotone,
    })
}

/// `Y = Z/p^k ⋉ X` with the generator acting through `gamma` (of order
/// `p^k`), and `y = (1, 1)` so that `c_y|_X = gamma`. `X` embeds in `Y` with
/// unchanged element codes.
pub fn semidirect_wrap(x: &Group, gamma: &GroupMap) -> Result<(Group, Elem)> {
    if !gamma.domain().is_whole() || !gamma.codomain().same(x) {
        return Err(Error::NotAutomorphism);
    }
    let m = gamma.permutation_order()?;
    if !is_p_power(m, x.p()) {
        return Err(Error::OrderNotPPower(m));
    }
    let y_group = Group::cyclic_extension(x, m, gamma.images())?;
    let y = (1 % m) * x.order();
    Ok((y_group, y))
}
