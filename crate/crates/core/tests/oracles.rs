//! Library results against brute-force oracles written directly from the
//! definitions.

use std::collections::{BTreeSet, HashSet};

use hnnp::abelian::{cyclic_cover, decide_abelian, default_cover_degree};
use hnnp::corpus;
use hnnp::filtrations::{decide_chief, Verdict};
use hnnp::group::{lower_central_series, Elem, Group, DEFAULT_CAP};
use hnnp::hnn::{core_fixpoint, core_orbit, twisted_pair, HnnPair};
use hnnp::random;
use hnnp::words::core_britton_oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `{g : φ^j(g) is defined for all |j| ≤ |G|}`.
fn brute_core(pair: &HnnPair) -> BTreeSet<Elem> {
    let n = pair.group().order() as usize;
    pair.a_cap_b()
        .elements()
        .iter()
        .copied()
        .filter(|&x| {
            let mut fwd = Some(x);
            let mut back = Some(x);
            for _ in 0..n {
                fwd = fwd.and_then(|y| pair.apply(y));
                back = back.and_then(|y| pair.apply_inv(y));
            }
            fwd.is_some() && back.is_some()
        })
        .collect()
}

/// Closure under multiplication of a generating set, by repeated products of
/// everything found so far.
fn brute_closure(g: &Group, gens: &[Elem]) -> BTreeSet<Elem> {
    let mut set: BTreeSet<Elem> = BTreeSet::from([g.identity()]);
    set.extend(gens.iter().copied());
    loop {
        let items: Vec<Elem> = set.iter().copied().collect();
        let before = set.len();
        for &x in &items {
            for &y in &items {
                set.insert(g.mul(x, y));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn brute_lcs(g: &Group) -> Vec<BTreeSet<Elem>> {
    let all: Vec<Elem> = (0..g.order()).collect();
    let mut terms = vec![all.iter().copied().collect::<BTreeSet<_>>()];
    loop {
        let last = terms.last().unwrap();
        let comms: Vec<Elem> = all
            .iter()
            .flat_map(|&x| last.iter().map(move |&y| (x, y)))
            .map(|(x, y)| g.commutator(x, y))
            .collect();
        let next = brute_closure(g, &comms);
        if next == *last {
            return terms;
        }
        terms.push(next);
    }
}

fn mixed_pairs(seed: u64, n: usize) -> Vec<HnnPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let p = if i % 2 == 0 { 2 } else { 3 };
            let g = random::random_small_group(&mut rng, p, 27).unwrap();
            random::random_pair(&mut rng, &g, 2).unwrap()
        })
        .collect()
}

#[test]
fn cores_match_definition() {
    for pair in mixed_pairs(11, 60) {
        let brute = brute_core(&pair);
        let fix = core_fixpoint(&pair).unwrap();
        assert_eq!(fix.subgroup.elements().iter().copied().collect::<BTreeSet<_>>(), brute);
        let orbit = core_orbit(&pair).unwrap();
        assert_eq!(orbit.subgroup, fix.subgroup);
        assert_eq!(core_britton_oracle(&pair, orbit.r + 2), fix.subgroup);
    }
}

#[test]
fn lower_central_series_matches_commutators() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut groups = vec![corpus::cyclic_shift_group().unwrap(), Group::group_ring_semidirect(2, 1).unwrap()];
    for p in [2, 3] {
        groups.extend((0..4).filter_map(|_| random::random_nonabelian_group(&mut rng, p, 81)));
    }
    for g in groups {
        let lib = lower_central_series(&g, DEFAULT_CAP).unwrap();
        let brute = brute_lcs(&g);
        let lib_sets: Vec<BTreeSet<Elem>> =
            lib.iter().map(|s| s.elements().iter().copied().collect()).collect();
        // the library stops at the trivial group; brute force stops when stable
        assert_eq!(lib_sets, brute, "group {}", g.tag());
    }
}

#[test]
fn group_axioms_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [2, 3] {
        for _ in 0..6 {
            let g = random::random_small_group(&mut rng, p, 81).unwrap();
            g.verify_axioms(DEFAULT_CAP).unwrap();
        }
    }
}

/// All normal subgroups of a small group, from closures of up to three elements.
fn normal_subgroups(g: &Group) -> Vec<BTreeSet<Elem>> {
    let n = g.order();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let s = brute_closure(g, &[x, y, z]);
                let key: Vec<Elem> = s.iter().copied().collect();
                if !seen.insert(key) {
                    continue;
                }
                let normal = (0..n).all(|c| s.iter().all(|&h| s.contains(&g.conj(h, c))));
                if normal {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Top-down search for a chief filtration `G = G_1 > ... > {1}` with
/// `φ(A∩G_i) = B∩G_i` and `φ(a) a^{-1} ∈ G_{i+1}` for `a ∈ A∩G_i`.
fn brute_chief_exists(pair: &HnnPair) -> bool {
    let g = pair.group();
    let p = g.p();
    let normals = normal_subgroups(g);
    let a: BTreeSet<Elem> = pair.a().elements().iter().copied().collect();
    let b: BTreeSet<Elem> = pair.b().elements().iter().copied().collect();
    let compatible = |n: &BTreeSet<Elem>| {
        let an: BTreeSet<Elem> = a.intersection(n).copied().collect();
        let bn: BTreeSet<Elem> = b.intersection(n).copied().collect();
        an.iter().map(|&x| pair.apply(x).unwrap()).collect::<BTreeSet<_>>() == bn
    };
    fn go(
        g: &Group,
        p: u64,
        pair: &HnnPair,
        top: &BTreeSet<Elem>,
        normals: &[BTreeSet<Elem>],
        a: &BTreeSet<Elem>,
        compatible: &dyn Fn(&BTreeSet<Elem>) -> bool,
    ) -> bool {
        if top.len() == 1 {
            return true;
        }
        normals.iter().any(|m| {
            m.len() * p as usize == top.len()
                && m.is_subset(top)
                && compatible(m)
                && top.iter().all(|&x| {
                    // central layer
                    (0..g.order()).all(|c| m.contains(&g.commutator(x, c)))
                })
                && a
                    .intersection(top)
                    .all(|&x| m.contains(&g.mul(pair.apply(x).unwrap(), g.inv(x))))
                && go(g, p, pair, m, normals, a, compatible)
        })
    }
    let whole: BTreeSet<Elem> = (0..g.order()).collect();
    go(g, p, pair, &whole, &normals, &a, &compatible)
}

#[test]
fn chief_search_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..40 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let g = random::random_small_group(&mut rng, p, if p == 2 { 16 } else { 27 }).unwrap();
        let pair = random::random_pair(&mut rng, &g, 2).unwrap();
        let lib = decide_chief(&pair, DEFAULT_CAP).unwrap().verdict == Verdict::ResiduallyP;
        assert_eq!(lib, brute_chief_exists(&pair), "pair {i} on {}", g.tag());
    }
}

#[test]
fn abelian_criterion_matches_chief_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..40 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let pair = random::random_abelian_pair(&mut rng, p, 3).unwrap();
        let ab = decide_abelian(&pair).unwrap().verdict;
        assert_eq!(ab, decide_chief(&pair, DEFAULT_CAP).unwrap().verdict);
    }
}

/// `|⊕_{i<s} G| / |im β|` by enumerating the image of `β` directly.
fn brute_cover_order(pair: &HnnPair, s: usize) -> u64 {
    let g = pair.group();
    let n = g.order();
    let enc = |blocks: &[Elem]| blocks.iter().fold(0u64, |acc, &x| acc * n + x);
    let mut gens = Vec::new();
    for &a in pair.a().generators() {
        let fa = pair.apply(a).unwrap();
        for i in 0..s - 1 {
            let mut v = vec![0; s];
            v[i] = a;
            v[i + 1] = g.inv(fa);
            gens.push(v);
        }
    }
    let add = |x: &[Elem], y: &[Elem]| -> Vec<Elem> { x.iter().zip(y).map(|(&a, &b)| g.mul(a, b)).collect() };
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut frontier = vec![vec![0; s]];
    while let Some(v) = frontier.pop() {
        for gen in &gens {
            let w = add(&v, gen);
            if seen.insert(enc(&w)) {
                frontier.push(w);
            }
        }
    }
    n.pow(s as u32) / seen.len() as u64
}

#[test]
fn cover_order_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut checked = 0;
    while checked < 15 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let pair = random::random_abelian_pair(&mut rng, p, 2).unwrap();
        let s = default_cover_degree(&pair).unwrap();
        if pair.group().order().pow(s as u32) > 200_000 {
            continue;
        }
        let data = cyclic_cover(&pair, s).unwrap();
        assert_eq!(data.g_prime.order(), brute_cover_order(&pair, s as usize));
        checked += 1;
    }
}

#[test]
fn twisted_pair_matches_formula() {
    let f = corpus::cyclic_shift().unwrap();
    let pair = &f.pair;
    let g = pair.group();
    for &a in pair.a().elements() {
        for &b in pair.b().elements() {
            let t = twisted_pair(pair, a, b).unwrap();
            for &x in pair.a().elements() {
                let direct = g.conj(pair.apply(g.conj(x, a)).unwrap(), b);
                assert_eq!(t.apply(x), Some(direct));
            }
        }
    }
}
