use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::arith::is_p_power;
use crate::error::Result;
use crate::group::{quotient, Elem, Filtration, GroupMap, Quotient, Subgroup};
use crate::hnn::{core_fixpoint, induced_pair_in, HnnPair};

/// A twist `c_b ∘ φ ∘ c_a` whose restriction to its own core has an order
/// that is not a power of `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: Elem,
    pub b: Elem,
    pub order: u64,
    pub core_order: u64,
}

/// Scans every twist of the pair, `b` in the outer loop and `a` in the inner
/// loop (both ascending), and returns the first violation.
///
/// Twists with identical tables are only examined once.
pub fn twist_violation(pair: &HnnPair) -> Result<Option<Violation>> {
    let g = pair.group();
    let p = g.p();
    let a_elems = pair.a().elements();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let phi_images: Vec<Elem> = pair.phi().images().to_vec();
    for &b in pair.b().elements() {
        let b_inv = g.inv(b);
        for &a in a_elems {
            let a_inv = g.inv(a);
            let table: Vec<Elem> = a_elems
                .iter()
                .map(|&x| {
                    let cx = g.mul(g.mul(a_inv, x), a);
                    let y = phi_images[pair.a().position(cx).expect("A is closed under conjugation by A")];
                    g.mul(g.mul(b_inv, y), b)
                })
                .collect();
            if !seen.insert(table.clone()) {
                continue;
            }
            let twisted = HnnPair::new(GroupMap::from_table(pair.a(), g, table), pair.b())?;
            let core = core_fixpoint(&twisted)?;
            let order = core.automorphism_order();
            if !is_p_power(order, p) {
                return Ok(Some(Violation {
                    a,
                    b,
                    order,
                    core_order: core.order(),
                }));
            }
        }
    }
    Ok(None)
}

/// The condition for the pair of indices `(1, n)`, which every filtration
/// has: `G_1/G_n = G`. Needs no enumeration of the ambient group.
pub fn obstruction_toplevel(pair: &HnnPair) -> Result<Option<Violation>> {
    twist_violation(pair)
}

/// A failed `(i, j)` check met while extending a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    /// Orders of the chain terms `G_1, ..., G_j`.
    pub chain: Vec<u64>,
    pub i: usize,
    pub j: usize,
    /// Least representatives in `G` of the twisting elements.
    pub a: Elem,
    pub b: Elem,
    pub order: u64,
    pub core_order: u64,
}

/// Transcript of an exhausted search over central compatible filtrations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Refutation {
    /// Chain prefixes that were extended by one term.
    pub prefixes: u64,
    /// Candidate terms rejected because `φ(A∩N) ≠ B∩N`.
    pub incompatible: u64,
    /// Number of failed checks per `(i, j)`.
    pub failures: BTreeMap<String, u64>,
    /// The first failures, in search order.
    pub records: Vec<FailureRecord>,
}

#[derive(Clone, Debug)]
pub enum FullObstruction {
    /// No central compatible filtration satisfies the condition.
    Refuted(Refutation),
    /// This filtration satisfies the condition for every `i < j`.
    Inconclusive(Filtration),
}

const MAX_RECORDS: usize = 64;

/// Enumerates the central filtrations compatible with the pair, checking the
/// twisted-core condition for every `i < j` as terms are added.
pub fn obstruction_full(pair: &HnnPair, cap: u64) -> Result<FullObstruction> {
    let g = pair.group();
    let whole = Subgroup::whole(g, cap)?;
    let mut s = FullSearch {
        pair,
        whole: whole.clone(),
        cap,
        between: HashMap::new(),
        quotients: HashMap::new(),
        checks: HashMap::new(),
        refutation: Refutation::default(),
    };
    let mut prefix = vec![whole];
    match s.dfs(&mut prefix)? {
        Some(chain) => Ok(FullObstruction::Inconclusive(Filtration::new(chain)?)),
        None => Ok(FullObstruction::Refuted(s.refutation)),
    }
}

type Key = Vec<Elem>;

struct FullSearch<'a> {
    pair: &'a HnnPair,
    whole: Subgroup,
    cap: u64,
    between: HashMap<Key, Vec<Subgroup>>,
    quotients: HashMap<Key, Quotient>,
    checks: HashMap<(Key, Key), Option<Violation>>,
    refutation: Refutation,
}

impl FullSearch<'_> {
    fn dfs(&mut self, prefix: &mut Vec<Subgroup>) -> Result<Option<Vec<Subgroup>>> {
        let last = prefix.last().expect("nonempty").clone();
        if last.is_trivial() {
            return Ok(Some(prefix.clone()));
        }
        for cand in self.next_terms(&last) {
            if !self.pair.is_compatible_with(&cand) {
                self.refutation.incompatible += 1;
                continue;
            }
            self.refutation.prefixes += 1;
            prefix.push(cand);
            let j = prefix.len();
            let mut failed = false;
            for i in 1..j {
                if let Some(v) = self.check(&prefix[i - 1], &prefix[j - 1])? {
                    self.record(prefix, i, j, v);
                    failed = true;
                    break;
                }
            }
            if !failed {
                if let Some(chain) = self.dfs(prefix)? {
                    return Ok(Some(chain));
                }
            }
            prefix.pop();
        }
        Ok(None)
    }

    fn record(&mut self, prefix: &[Subgroup], i: usize, j: usize, v: Violation) {
        *self.refutation.failures.entry(format!("{i},{j}")).or_default() += 1;
        if self.refutation.records.len() < MAX_RECORDS {
            let q = &self.quotients[prefix[j - 1].elements()];
            self.refutation.records.push(FailureRecord {
                chain: prefix.iter().map(Subgroup::order).collect(),
                i,
                j,
                a: q.lift(v.a),
                b: q.lift(v.b),
                order: v.order,
                core_order: v.core_order,
            });
        }
    }

    /// Proper subgroups of `last` containing `[G, last]`, sorted.
    fn next_terms(&mut self, last: &Subgroup) -> Vec<Subgroup> {
        if let Some(v) = self.between.get(last.elements()) {
            return v.clone();
        }
        let bottom = last.commutator_with(&self.whole);
        let mut seen: HashSet<Key> = HashSet::from([bottom.elements().to_vec()]);
        let mut found = vec![bottom.clone()];
        let mut queue = VecDeque::from([bottom]);
        while let Some(h) = queue.pop_front() {
            for &x in last.elements() {
                if h.contains(x) {
                    continue;
                }
                let bigger = h.join(&Subgroup::generated(last.group(), &[x]).expect("x lies in the group"));
                if seen.insert(bigger.elements().to_vec()) {
                    found.push(bigger.clone());
                    queue.push_back(bigger);
                }
            }
        }
        found.retain(|h| h.order() < last.order());
        found.sort_by(|a, b| a.elements().cmp(b.elements()));
        self.between.insert(last.elements().to_vec(), found.clone());
        found
    }

    fn check(&mut self, gi: &Subgroup, gj: &Subgroup) -> Result<Option<Violation>> {
        let key = (gi.elements().to_vec(), gj.elements().to_vec());
        if let Some(v) = self.checks.get(&key) {
            return Ok(*v);
        }
        if !self.quotients.contains_key(gj.elements()) {
            self.quotients.insert(gj.elements().to_vec(), quotient(gj, self.cap)?);
        }
        let q = &self.quotients[gj.elements()];
        let layer = induced_pair_in(self.pair, &self.pair.a().intersect(gi), q)?;
        let v = twist_violation(&layer)?;
        self.checks.insert(key, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Group, DEFAULT_CAP};

    #[test]
    fn identity_pair_is_inconclusive() {
        let g = Group::group_ring_semidirect(2, 1).unwrap();
        let w = Subgroup::whole(&g, 8).unwrap();
        let pair = HnnPair::new(GroupMap::identity_on(&w), &w).unwrap();
        assert!(obstruction_toplevel(&pair).unwrap().is_none());
        assert!(matches!(
            obstruction_full(&pair, DEFAULT_CAP).unwrap(),
            FullObstruction::Inconclusive(_)
        ));
    }

    #[test]
    fn order_two_automorphism_is_refuted() {
        let g = Group::abelian(3, &[1]).unwrap();
        let pair = HnnPair::from_generators(&g, &[1], &[2], None).unwrap();
        let v = obstruction_toplevel(&pair).unwrap().unwrap();
        assert_eq!((v.a, v.b, v.order), (0, 0, 2));
        match obstruction_full(&pair, DEFAULT_CAP).unwrap() {
            FullObstruction::Refuted(r) => {
                assert_eq!(r.failures.get("1,2"), Some(&1));
                assert_eq!(r.records.len(), 1);
            }
            FullObstruction::Inconclusive(_) => panic!("expected refutation"),
        }
    }
}
