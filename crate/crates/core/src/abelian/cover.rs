use serde::Serialize;

use crate::arith::{is_p_power, next_p_power_above};
use crate::error::{Error, Result};
use crate::group::{Elem, Group, GroupMap, Subgroup, DEFAULT_CAP};
use crate::hnn::{core_fixpoint, core_orbit, HnnPair};
use crate::linalg::{Matrix, SmithForm, Span};

/// First homology of the degree-`s` cyclic cover's vertex part, presented as
/// `G' = (⊕_{i<s} G×i) / im β` with `β(a×i) = a×i - φ(a)×(i+1)`.
#[derive(Clone, Debug)]
pub struct CyclicCoverData {
    pub s: u64,
    /// Exponent `K` of the working modulus `p^K`.
    pub modulus_exponent: u32,
    pub g_prime: Group,
    pub smith: SmithForm,
    /// `Ψ_j: G → G'`, `g ↦ g×j`.
    pub blocks: Vec<GroupMap>,
    /// `(G', φ': A' → B')` with `A' = A×(s-1)`, `B' = B×0`.
    pub pair_prime: HnnPair,
    pub beta_injective: bool,
    pub expected_order: u128,
    pub order_formula_holds: bool,
    pub block_injective: Vec<bool>,
    original: HnnPair,
}

impl CyclicCoverData {
    pub fn original(&self) -> &HnnPair {
        &self.original
    }
}

/// Least power of `p` above the orbit stabilization index (and above 1).
pub fn default_cover_degree(pair: &HnnPair) -> Result<u64> {
    let r = core_orbit(pair)?.r as u64;
    Ok(next_p_power_above(pair.p(), r.max(1)))
}

pub fn cyclic_cover(pair: &HnnPair, s: u64) -> Result<CyclicCoverData> {
    let g = pair.group();
    let p = g.p();
    let exps = super::exponents_of(pair)?;
    let r = core_orbit(pair)?.r as u64;
    if !is_p_power(s, p) || s <= r.max(1) {
        return Err(Error::InvalidParameters(format!(
            "cover degree {s} must be a power of {p} above {}",
            r.max(1)
        )));
    }
    let d = exps.len();
    let k = *exps.iter().max().expect("nonempty");
    let q = p.pow(k);
    let su = s as usize;
    let n = su * d;

    let mut columns: Vec<Vec<u64>> = Vec::new();
    for i in 0..su {
        for (j, &e) in exps.iter().enumerate() {
            let mut c = vec![0; n];
            c[i * d + j] = p.pow(e) % q;
            columns.push(c);
        }
    }
    for &a in pair.a().generators() {
        let (va, vb) = (g.decode(a), g.decode(pair.apply(a).expect("in A")));
        for i in 0..su - 1 {
            let mut c = vec![0; n];
            for j in 0..d {
                c[i * d + j] = va[j];
                c[(i + 1) * d + j] = (q - vb[j]) % q;
            }
            columns.push(c);
        }
    }
    let matrix: Matrix = (0..n).map(|row| columns.iter().map(|c| c[row]).collect()).collect();
    let smith = SmithForm::compute(&matrix, p, k);
    let factor_exps = smith.factor_exponents();
    let g_prime = if factor_exps.is_empty() {
        Group::trivial(p)?
    } else {
        Group::abelian(p, &factor_exps)?
    };

    let whole = Subgroup::whole(g, DEFAULT_CAP)?;
    let mut blocks = Vec::with_capacity(su);
    for j in 0..su {
        let map = GroupMap::from_fn(&whole, &g_prime, |x| {
            let mut v = vec![0; n];
            v[j * d..(j + 1) * d].copy_from_slice(&g.decode(x));
            g_prime.encode(&smith.coords(&v)).expect("coordinates reduced per factor")
        });
        map.check_homomorphism()?;
        blocks.push(map);
    }
    let block_injective = blocks.iter().map(GroupMap::is_injective).collect();

    let a_prime = blocks[su - 1].image_of(pair.a())?;
    let b_prime = blocks[0].image_of(pair.b())?;
    let mut table: Vec<(Elem, Elem)> = pair
        .phi()
        .pairs()
        .map(|(x, y)| (blocks[su - 1].apply(x).unwrap(), blocks[0].apply(y).unwrap()))
        .collect();
    table.sort_unstable();
    table.dedup();
    if table.len() as u64 != a_prime.order() {
        return Err(Error::OracleDisagreement("last block does not embed A".into()));
    }
    let phi_prime = GroupMap::from_fn(&a_prime, &g_prime, |x| {
        table[table.binary_search_by_key(&x, |e| e.0).expect("in A'")].1
    });
    let pair_prime = HnnPair::new(phi_prime, &b_prime)?;

    let beta_injective = socle_rank_check(pair, &exps, su);
    let expected_order = (g.order() as u128)
        .checked_pow(s as u32)
        .ok_or(Error::EncodingOverflow)?
        / (pair.a().order() as u128).pow(s as u32 - 1);
    let order_formula_holds = g_prime.order() as u128 == expected_order;

    Ok(CyclicCoverData {
        s,
        modulus_exponent: k,
        g_prime,
        smith,
        blocks,
        pair_prime,
        beta_injective,
        expected_order,
        order_formula_holds,
        block_injective,
        original: pair.clone(),
    })
}

/// `β` is injective exactly when it is injective on elements of order `p`,
/// where it is an `F_p`-linear map; compare its rank with the socle dimension.
fn socle_rank_check(pair: &HnnPair, exps: &[u32], s: usize) -> bool {
    let g = pair.group();
    let p = g.p();
    let d = exps.len();
    let socle = |x: Elem| -> Option<Vec<u64>> {
        let v = g.decode(x);
        let mut out = Vec::with_capacity(d);
        for (&digit, &e) in v.iter().zip(exps) {
            let unit = p.pow(e - 1);
            if digit % unit != 0 {
                return None;
            }
            out.push(digit / unit);
        }
        Some(out)
    };
    let mut basis = Vec::new();
    let mut span = Span::new(d, p);
    for &a in pair.a().elements() {
        if let Some(c) = socle(a) {
            if span.insert(&c) {
                basis.push(a);
            }
        }
    }
    let mut image = Span::new(s * d, p);
    for &a in &basis {
        let ca = socle(a).expect("socle element");
        let cb = socle(pair.apply(a).expect("in A")).expect("φ preserves order p");
        for i in 0..s - 1 {
            let mut v = vec![0; s * d];
            for j in 0..d {
                v[i * d + j] = ca[j];
                v[(i + 1) * d + j] = (p - cb[j]) % p;
            }
            image.insert(&v);
        }
    }
    image.rank() == basis.len() * (s - 1)
}

/// Element-by-element confirmation that the cover reduces the pair to its core.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AbPrimeReport {
    /// `H(G', φ') = A' ∩ B'`.
    pub core_is_intersection: bool,
    /// `Ψ_0` maps `H(G, φ)` onto `H(G', φ')`.
    pub psi_restricts: bool,
    /// `Ψ_0 ∘ φ^s = φ' ∘ Ψ_0` on `H(G, φ)`.
    pub square_commutes: bool,
    /// `b×0` and `φ^{s-1}(b)×(s-1)` coincide in `G'` for `b` in the core.
    pub representatives_agree: bool,
    /// The set `I` solved by forward substitution equals the core.
    pub i_direct_matches: bool,
    /// `{b ∈ B : b×0 ∈ A'}` equals the core.
    pub i_membership_matches: bool,
    pub orders_agree: bool,
    pub failures: Vec<String>,
}

impl AbPrimeReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_abprime(data: &CyclicCoverData) -> Result<AbPrimeReport> {
    let pair = &data.original;
    let s = data.s as usize;
    let h = core_fixpoint(pair)?;
    let hp = core_fixpoint(&data.pair_prime)?;
    let psi0 = &data.blocks[0];
    let last = &data.blocks[s - 1];
    let mut rep = AbPrimeReport::default();

    let cap = data.pair_prime.a_cap_b();
    rep.core_is_intersection = hp.subgroup == cap;
    if !rep.core_is_intersection {
        rep.failures.push(format!(
            "core of the cover pair has order {}, A'∩B' has order {}",
            hp.order(),
            cap.order()
        ));
    }

    let image = psi0.image_of(&h.subgroup)?;
    rep.psi_restricts = image == hp.subgroup && image.order() == h.order();
    if !rep.psi_restricts {
        rep.failures.push("Ψ does not map the core onto the cover core".into());
    }

    let iterate = |x: Elem, times: usize| -> Option<Elem> { (0..times).try_fold(x, |y, _| pair.apply(y)) };
    rep.square_commutes = true;
    rep.representatives_agree = true;
    for &b in h.subgroup.elements() {
        let fs = iterate(b, s).expect("core is φ-stable");
        let left = psi0.apply(fs).expect("total");
        let right = data.pair_prime.apply(psi0.apply(b).expect("total"));
        if right != Some(left) {
            rep.square_commutes = false;
            rep.failures.push(format!("square fails at {}", pair.group().format(b)));
        }
        let moved = last.apply(iterate(b, s - 1).expect("core is φ-stable")).expect("total");
        if moved != psi0.apply(b).expect("total") {
            rep.representatives_agree = false;
            rep.failures.push(format!("representatives differ at {}", pair.group().format(b)));
        }
    }

    let direct: Vec<Elem> = pair
        .b()
        .elements()
        .iter()
        .copied()
        .filter(|&b| {
            let mut x = b;
            if !pair.a().contains(x) {
                return false;
            }
            for _ in 1..s {
                x = pair.apply(x).expect("x in A");
                if !pair.a().contains(x) {
                    return false;
                }
            }
            true
        })
        .collect();
    rep.i_direct_matches = direct == h.subgroup.elements();
    if !rep.i_direct_matches {
        rep.failures.push(format!("forward substitution gives {} elements", direct.len()));
    }
    let a_prime = data.pair_prime.a();
    let member: Vec<Elem> = pair
        .b()
        .elements()
        .iter()
        .copied()
        .filter(|&b| a_prime.contains(psi0.apply(b).expect("total")))
        .collect();
    rep.i_membership_matches = member == h.subgroup.elements();
    if !rep.i_membership_matches {
        rep.failures.push(format!("membership in A' gives {} elements", member.len()));
    }

    let phi_s = GroupMap::from_fn(&h.subgroup, pair.group(), |x| iterate(x, s).expect("core is φ-stable"));
    rep.orders_agree = phi_s.permutation_order()? == hp.automorphism_order();
    if !rep.orders_agree {
        rep.failures.push("φ^s on the core and φ' on the cover core have different orders".into());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_collapses_blocks() {
        let g = Group::abelian(3, &[1]).unwrap();
        let w = Subgroup::whole(&g, 3).unwrap();
        let pair = HnnPair::new(GroupMap::identity_on(&w), &w).unwrap();
        assert_eq!(default_cover_degree(&pair).unwrap(), 3);
        let data = cyclic_cover(&pair, 3).unwrap();
        assert_eq!(data.g_prime.order(), 3);
        assert!(data.beta_injective && data.order_formula_holds);
        assert!(data.block_injective.iter().all(|&b| b));
        let rep = check_abprime(&data).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        assert_eq!(data.pair_prime.a_cap_b().order(), 3);
    }

    #[test]
    fn trivial_core_cover() {
        let g = Group::abelian(2, &[1, 1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[2], &[1], None).unwrap();
        let s = default_cover_degree(&pair).unwrap();
        let data = cyclic_cover(&pair, s).unwrap();
        assert!(data.order_formula_holds);
        let rep = check_abprime(&data).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        assert!(data.pair_prime.a_cap_b().is_trivial());
        assert!(cyclic_cover(&pair, 3).is_err());
    }

    #[test]
    fn cyclic_of_order_nine() {
        let g = Group::abelian(3, &[2, 1]).unwrap();
        // A = <(1,0)> ≅ Z/9 -> B = <(1,1)>
        let pair = HnnPair::from_generators(&g, &[3], &[4], None).unwrap();
        let s = default_cover_degree(&pair).unwrap();
        let data = cyclic_cover(&pair, s).unwrap();
        assert!(data.beta_injective && data.order_formula_holds);
        let rep = check_abprime(&data).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
    }
}
