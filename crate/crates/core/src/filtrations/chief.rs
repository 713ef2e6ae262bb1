use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::Verdict;
use crate::error::{Error, Result};
use crate::group::{Elem, Filtration, Subgroup};
use crate::hnn::HnnPair;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Kernels expanded during the search.
    pub states: u64,
    /// Candidate layers examined (before the conditions were checked).
    pub candidates: u64,
    /// Kernels skipped because they were already known to be dead ends.
    pub memo_hits: u64,
}

#[derive(Clone, Debug)]
pub struct ChiefDecision {
    pub verdict: Verdict,
    /// A chief filtration witnessing a positive answer.
    pub certificate: Option<Filtration>,
    pub stats: SearchStats,
}

/// Exhaustive search for a chief filtration compatible with the pair and with
/// `φ(a) ≡ a mod G_{i+1}` for `a ∈ A∩G_i`.
///
/// The chain is built from the bottom: from the current kernel `N` every
/// normal `M ⊃ N` with `M/N` central of order `p` is tried in lexicographic
/// order of its elements. Kernels from which `G` is unreachable are memoized.
pub fn decide_chief(pair: &HnnPair, cap: u64) -> Result<ChiefDecision> {
    decide_chief_with(pair, cap, true)
}

pub fn decide_chief_with(pair: &HnnPair, cap: u64, memoize: bool) -> Result<ChiefDecision> {
    let g = pair.group();
    g.elements(cap)?;
    let mut search = Search {
        pair,
        memoize,
        dead: HashSet::new(),
        candidates: HashMap::new(),
        stats: SearchStats::default(),
    };
    let bottom = Subgroup::trivial(g);
    let chain = search.extend(&bottom);
    let stats = search.stats;
    match chain {
        Some(mut terms) => {
            terms.push(bottom);
            let f = Filtration::new(terms)?;
            Ok(ChiefDecision {
                verdict: Verdict::ResiduallyP,
                certificate: Some(f),
                stats,
            })
        }
        None => Ok(ChiefDecision {
            verdict: Verdict::NotResiduallyP,
            certificate: None,
            stats,
        }),
    }
}

struct Search<'a> {
    pair: &'a HnnPair,
    memoize: bool,
    dead: HashSet<Vec<Elem>>,
    candidates: HashMap<Vec<Elem>, Vec<Subgroup>>,
    stats: SearchStats,
}

impl Search<'_> {
    /// Terms strictly above `n`, top first, ending just above `n`.
    fn extend(&mut self, n: &Subgroup) -> Option<Vec<Subgroup>> {
        if n.is_whole() {
            return Some(Vec::new());
        }
        if self.memoize && self.dead.contains(n.elements()) {
            self.stats.memo_hits += 1;
            return None;
        }
        self.stats.states += 1;
        for m in self.layers_above(n) {
            self.stats.candidates += 1;
            if !self.layer_ok(n, &m) {
                continue;
            }
            if let Some(mut rest) = self.extend(&m) {
                rest.push(m);
                return Some(rest);
            }
        }
        if self.memoize {
            self.dead.insert(n.elements().to_vec());
        }
        None
    }

    /// Normal subgroups `M ⊃ N` with `M/N` central of order `p`, sorted.
    fn layers_above(&mut self, n: &Subgroup) -> Vec<Subgroup> {
        if let Some(c) = self.candidates.get(n.elements()) {
            return c.clone();
        }
        let g = n.group();
        let p = g.p();
        let mut covered: HashSet<Elem> = n.elements().iter().copied().collect();
        let mut out = Vec::new();
        for x in 0..g.order() {
            if covered.contains(&x) || !n.contains(g.pow(x, p)) {
                continue;
            }
            if !g.generators().iter().all(|&s| n.contains(g.commutator(x, s))) {
                continue;
            }
            let mut elems = Vec::with_capacity(n.elements().len() * p as usize);
            let mut power = 0;
            for _ in 0..p {
                elems.extend(n.elements().iter().map(|&k| g.mul(power, k)));
                power = g.mul(power, x);
            }
            elems.sort_unstable();
            covered.extend(elems.iter().copied());
            out.push(Subgroup::from_sorted(g, elems));
        }
        out.sort_by(|a, b| a.elements().cmp(b.elements()));
        self.candidates.insert(n.elements().to_vec(), out.clone());
        out
    }

    fn layer_ok(&self, n: &Subgroup, m: &Subgroup) -> bool {
        let pair = self.pair;
        let g = pair.group();
        let am = pair.a().intersect(m);
        if am.order() != pair.b().intersect(m).order() {
            return false;
        }
        am.elements().iter().all(|&x| {
            let y = pair.apply(x).expect("in A");
            m.contains(y) && n.contains(g.mul(y, g.inv(x)))
        })
    }
}

/// Re-checks a chief certificate from scratch: chief, compatible, and
/// `φ(a) a^{-1} ∈ G_{i+1}` for every `a ∈ A∩G_i`.
pub fn verify_chief_certificate(pair: &HnnPair, f: &Filtration) -> Result<()> {
    if !f.group().same(pair.group()) {
        return Err(Error::AmbientMismatch);
    }
    if !f.is_chief() {
        return Err(Error::Certificate("filtration is not chief".into()));
    }
    let g = pair.group();
    for i in 1..=f.len() {
        let gi = f.term(i);
        if let Some(w) = pair.compatibility_witness(&gi) {
            return Err(Error::Certificate(format!(
                "term {i} is not compatible (witness {})",
                g.format(w)
            )));
        }
        let next = f.term(i + 1);
        for &a in pair.a().intersect(&gi).elements() {
            let d = g.mul(pair.apply(a).expect("in A"), g.inv(a));
            if !next.contains(d) {
                return Err(Error::Certificate(format!(
                    "φ(a) and a differ modulo term {} for a = {}",
                    i + 1,
                    g.format(a)
                )));
            }
        }
    }
    Ok(())
}
