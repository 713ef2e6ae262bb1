//! Seeded generators of small groups and HNN pairs for property suites and
//! surveys.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::is_p_power;
use crate::error::Result;
use crate::group::{Elem, Group, GroupMap, Subgroup, DEFAULT_CAP};
use crate::hnn::HnnPair;
use crate::linalg::{self, Matrix};

const TRIES: usize = 24;

/// `⊕ Z/p^{e_i}` with `Σ e_i` between 1 and `max_log`.
pub fn random_abelian_group(rng: &mut impl Rng, p: u64, max_log: u32) -> Result<Group> {
    let total = rng.gen_range(1..=max_log.max(1));
    let mut left = total;
    let mut exps = Vec::new();
    while left > 0 {
        let e = rng.gen_range(1..=left);
        exps.push(e);
        left -= e;
    }
    exps.sort_unstable_by(|a, b| b.cmp(a));
    Group::abelian(p, &exps)
}

/// Elementary abelian `F_p^d`.
pub fn elementary_group(p: u64, d: u32) -> Result<Group> {
    Group::abelian(p, &vec![1; d as usize])
}

fn random_unipotent(rng: &mut impl Rng, p: u64, n: usize) -> Matrix {
    let mut m = linalg::identity(n);
    for (i, row) in m.iter_mut().enumerate() {
        for v in row.iter_mut().skip(i + 1) {
            *v = rng.gen_range(0..p);
        }
    }
    m
}

/// A non-abelian group of order at most `max_order` when one is available,
/// drawn from group-ring extensions and cyclic extensions of `F_p^n` by
/// unipotent matrices.
pub fn random_nonabelian_group(rng: &mut impl Rng, p: u64, max_order: u64) -> Option<Group> {
    let mut options: Vec<Group> = Vec::new();
    for rank in 1..=2u32 {
        if let Ok(order) = crate::arith::checked_pow(p, rank + p.pow(rank) as u32) {
            if order <= max_order {
                options.extend(Group::group_ring_semidirect(p, rank).ok());
            }
        }
    }
    for _ in 0..TRIES {
        let n = rng.gen_range(2..=3usize);
        let m = if rng.gen_bool(0.7) { p } else { p * p };
        let order = m.saturating_mul(p.saturating_pow(n as u32));
        if order > max_order {
            continue;
        }
        let u = random_unipotent(rng, p, n);
        if let Ok(g) = Group::matrix_semidirect(p, m, &u, &[]) {
            if !g.is_abelian() {
                options.push(g);
            }
        }
    }
    options.choose(rng).cloned()
}

/// Any small p-group: abelian with probability one half.
pub fn random_small_group(rng: &mut impl Rng, p: u64, max_order: u64) -> Result<Group> {
    let max_log = p_log_floor(max_order, p);
    if rng.gen_bool(0.5) {
        if let Some(g) = random_nonabelian_group(rng, p, max_order) {
            return Ok(g);
        }
    }
    random_abelian_group(rng, p, max_log)
}

fn p_log_floor(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut x = 1u64;
    while x.saturating_mul(p) <= n {
        x *= p;
        k += 1;
    }
    k
}

fn random_elem(rng: &mut impl Rng, g: &Group) -> Elem {
    rng.gen_range(0..g.order())
}

/// A random pair on `g`: `A` generated by up to `max_gens` random elements,
/// `φ` from random generator images when a valid injective choice turns up,
/// otherwise a conjugation (composed with a power map when `g` is abelian).
pub fn random_pair(rng: &mut impl Rng, g: &Group, max_gens: usize) -> Result<HnnPair> {
    let k = rng.gen_range(0..=max_gens);
    let gens: Vec<Elem> = (0..k).map(|_| random_elem(rng, g)).collect();
    let a = Subgroup::generated(g, &gens)?;
    let gens = a.generators().to_vec();
    for _ in 0..TRIES {
        let images: Vec<Elem> = gens.iter().map(|_| random_elem(rng, g)).collect();
        if let Ok(phi) = GroupMap::from_generator_images(&a, g, &gens, &images) {
            if phi.is_injective() {
                let b = phi.image();
                return HnnPair::new(phi, &b);
            }
        }
    }
    let c = random_elem(rng, g);
    let m = if g.is_abelian() { unit_power(rng, g.p()) } else { 1 };
    let images: Vec<Elem> = gens.iter().map(|&x| g.pow(g.conj(x, c), m)).collect();
    HnnPair::from_generators(g, &gens, &images, None)
}

fn unit_power(rng: &mut impl Rng, p: u64) -> u64 {
    loop {
        let m = rng.gen_range(1..p.max(2) * p);
        if m % p != 0 {
            return m;
        }
    }
}

/// Random pair on a random abelian group of order at most `p^max_log`.
pub fn random_abelian_pair(rng: &mut impl Rng, p: u64, max_log: u32) -> Result<HnnPair> {
    let g = random_abelian_group(rng, p, max_log)?;
    random_pair(rng, &g, 2)
}

/// Random invertible matrix over `F_p` given by its columns.
fn random_basis(rng: &mut impl Rng, p: u64, d: usize) -> Vec<Vec<u64>> {
    loop {
        let cols: Vec<Vec<u64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(0..p)).collect()).collect();
        if linalg::Span::from_vectors(d, p, &cols).rank() == d {
            return cols;
        }
    }
}

/// Elementary abelian pair on `F_p^d` whose `φ` maps `A∩B` onto itself with
/// p-power order.
///
/// In a random basis `w_1.. p_1.. q_1.. s_1..`: `A = ⟨w, p⟩`, `B = ⟨w, q⟩`,
/// `φ` unipotent on `⟨w⟩` and `φ(p_i) = q_i + (element of ⟨w⟩)`.
pub fn random_elementary_hyp_pair(rng: &mut impl Rng, p: u64, d: u32) -> Result<HnnPair> {
    let g = elementary_group(p, d)?;
    let d = d as usize;
    let basis = random_basis(rng, p, d);
    let dw = rng.gen_range(0..=d);
    let dp = rng.gen_range(0..=(d - dw) / 2);
    let (w, rest) = basis.split_at(dw);
    let (pp, rest) = rest.split_at(dp);
    let q = &rest[..dp];
    let u = random_unipotent(rng, p, dw);
    let combo = |coeffs: &[u64], vs: &[Vec<u64>]| -> Vec<u64> {
        let mut out = vec![0; d];
        for (c, v) in coeffs.iter().zip(vs) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = (*o + c * x) % p;
            }
        }
        out
    };
    let enc = |v: &[u64]| g.encode(v).expect("reduced");
    let mut a_gens = Vec::new();
    let mut images = Vec::new();
    for j in 0..dw {
        a_gens.push(enc(&w[j]));
        images.push(enc(&combo(&linalg::column(&u, j), w)));
    }
    for (pi, qi) in pp.iter().zip(q) {
        a_gens.push(enc(pi));
        let shift: Vec<u64> = (0..dw).map(|_| rng.gen_range(0..p)).collect();
        let img: Vec<u64> = combo(&shift, w).iter().zip(qi).map(|(a, b)| (a + b) % p).collect();
        images.push(enc(&img));
    }
    HnnPair::from_generators(&g, &a_gens, &images, None)
}

/// Whether `φ` maps `A∩B` onto itself with p-power order.
pub fn satisfies_intersection_hypothesis(pair: &HnnPair) -> bool {
    let w = pair.a_cap_b();
    match pair.phi().image_of(&w) {
        Ok(img) if img == w => pair
            .phi()
            .restrict(&w)
            .and_then(|m| m.permutation_order())
            .is_ok_and(|o| is_p_power(o, pair.p())),
        _ => false,
    }
}

/// Random automorphism of `g` of p-power order (identity if none is found).
fn random_p_automorphism(rng: &mut impl Rng, g: &Group) -> Result<GroupMap> {
    let whole = Subgroup::whole(g, DEFAULT_CAP)?;
    let gens = g.generators().to_vec();
    for _ in 0..TRIES {
        let images: Vec<Elem> = gens.iter().map(|_| random_elem(rng, g)).collect();
        if let Ok(sigma) = GroupMap::from_generator_images(&whole, g, &gens, &images) {
            if !sigma.is_injective() {
                continue;
            }
            // σ^m has p-power order once m is the p'-part of ord(σ)
            let mut m = sigma.permutation_order()?;
            while m % g.p() == 0 {
                m /= g.p();
            }
            let table: Vec<Elem> = whole
                .elements()
                .iter()
                .map(|&x| (0..m).fold(x, |y, _| sigma.apply(y).expect("total")))
                .collect();
            return Ok(GroupMap::from_fn(&whole, g, |x| table[x as usize]));
        }
    }
    Ok(GroupMap::identity_on(&whole))
}

/// Abelian pair with `φ(A∩B) = A∩B` of p-power order: either a random pair
/// that happens to qualify, or the restriction of a p-power order
/// automorphism to an invariant subgroup.
pub fn random_abelian_hyp_pair(rng: &mut impl Rng, p: u64, max_log: u32) -> Result<HnnPair> {
    if rng.gen_bool(0.5) {
        for _ in 0..TRIES {
            let pair = random_abelian_pair(rng, p, max_log)?;
            if satisfies_intersection_hypothesis(&pair) && !pair.a_cap_b().is_trivial() {
                return Ok(pair);
            }
        }
    }
    let g = random_abelian_group(rng, p, max_log)?;
    let alpha = random_p_automorphism(rng, &g)?;
    let k = rng.gen_range(0..=2);
    let mut orbit = Vec::new();
    for _ in 0..k {
        let mut x = random_elem(rng, &g);
        for _ in 0..alpha.permutation_order()? {
            orbit.push(x);
            x = alpha.apply(x).expect("total");
        }
    }
    let a = Subgroup::generated(&g, &orbit)?;
    let phi = alpha.restrict(&a)?;
    HnnPair::new(phi, &a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let p = *[2u64, 3].choose(&mut rng).unwrap();
            let pair = random_abelian_pair(&mut rng, p, 4).unwrap();
            assert!(pair.group().order() <= p.pow(4));
            let g = random_small_group(&mut rng, p, 81).unwrap();
            assert!(g.order() <= 81);
            let e = random_elementary_hyp_pair(&mut rng, p, 3).unwrap();
            assert!(satisfies_intersection_hypothesis(&e));
            let h = random_abelian_hyp_pair(&mut rng, p, 4).unwrap();
            assert!(satisfies_intersection_hypothesis(&h));
        }
    }
}
