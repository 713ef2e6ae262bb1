use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{Elem, Group};
use crate::error::{Error, Result};

/// A subgroup stored as the sorted list of its element codes.
#[derive(Clone)]
pub struct Subgroup(Arc<Inner>);

struct Inner {
    group: Group,
    elems: Vec<Elem>,
    gens: OnceLock<Vec<Elem>>,
}

impl Subgroup {
    pub(crate) fn from_sorted(group: &Group, elems: Vec<Elem>) -> Subgroup {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(elems.first(), Some(&0));
        Subgroup(Arc::new(Inner {
            group: group.clone(),
            elems,
            gens: OnceLock::new(),
        }))
    }

    pub(crate) fn from_set(group: &Group, set: HashSet<Elem>) -> Subgroup {
        let mut v: Vec<Elem> = set.into_iter().collect();
        v.sort_unstable();
        Subgroup::from_sorted(group, v)
    }

    pub fn whole(group: &Group, cap: u64) -> Result<Subgroup> {
        let all = group.elements(cap)?;
        Ok(Subgroup::from_sorted(group, all.collect()))
    }

    pub fn trivial(group: &Group) -> Subgroup {
        Subgroup::from_sorted(group, vec![0])
    }

    /// Subgroup generated by `gens`, after validating each code.
    pub fn generated(group: &Group, gens: &[Elem]) -> Result<Subgroup> {
        for &g in gens {
            group.check(g)?;
        }
        Ok(subgroup_closure(group, gens))
    }

    pub fn group(&self) -> &Group {
        &self.0.group
    }

    pub fn elements(&self) -> &[Elem] {
        &self.0.elems
    }

    pub fn order(&self) -> u64 {
        self.0.elems.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.0.elems.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group().order()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.0.elems.binary_search(&e).is_ok()
    }

    pub fn position(&self, e: Elem) -> Option<usize> {
        self.0.elems.binary_search(&e).ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.elements().iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let v = small.elements().iter().copied().filter(|&x| big.contains(x)).collect();
        Subgroup::from_sorted(self.group(), v)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        if other.is_subset(self) {
            return self.clone();
        }
        let mut gens = self.generators().to_vec();
        gens.extend_from_slice(other.generators());
        subgroup_closure(self.group(), &gens)
    }

    /// Greedy generating set: scan the sorted elements and keep each one that
    /// is not yet in the closure of those kept so far.
    pub fn generators(&self) -> &[Elem] {
        self.0.gens.get_or_init(|| {
            let g = self.group();
            let mut gens = Vec::new();
            let mut set: HashSet<Elem> = HashSet::from([0]);
            for &x in self.elements() {
                if set.len() as u64 == self.order() {
                    break;
                }
                if !set.contains(&x) {
                    gens.push(x);
                    set = extend_closure(g, set, &gens);
                }
            }
            gens
        })
    }

    /// Conjugates of the generators by the ambient generators stay inside.
    pub fn check_normal(&self) -> Result<()> {
        let g = self.group();
        for &h in self.generators() {
            for &s in g.generators() {
                if !self.contains(g.conj(h, s)) {
                    return Err(Error::NotNormal { element: h, generator: s });
                }
            }
        }
        Ok(())
    }

    pub fn is_normal(&self) -> bool {
        self.check_normal().is_ok()
    }

    /// `[self, other]`, the normal closure (in the ambient group) of the
    /// commutators of generators when both subgroups are normal.
    pub fn commutator_with(&self, other: &Subgroup) -> Subgroup {
        let g = self.group();
        let mut comms = Vec::new();
        for &x in self.generators() {
            for &y in other.generators() {
                let c = g.commutator(x, y);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        normal_closure(g, &comms)
    }

    pub fn format(&self) -> String {
        let g = self.group();
        let parts: Vec<String> = self.generators().iter().map(|&x| g.format(x)).collect();
        format!("<{}>", parts.join(", "))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group().same(other.group()) && self.elements() == other.elements()
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order={}, gens={:?})", self.order(), self.generators())
    }
}

fn extend_closure(g: &Group, mut set: HashSet<Elem>, gens: &[Elem]) -> HashSet<Elem> {
    let mut queue: VecDeque<Elem> = set.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push_back(y);
            }
        }
    }
    set
}

/// Subgroup generated by `gens` (closure under right multiplication).
pub fn subgroup_closure(g: &Group, gens: &[Elem]) -> Subgroup {
    let gens: Vec<Elem> = gens.iter().copied().filter(|&x| x != 0).collect();
    Subgroup::from_set(g, extend_closure(g, HashSet::from([0]), &gens))
}

/// Smallest normal subgroup containing `gens`.
pub fn normal_closure(g: &Group, gens: &[Elem]) -> Subgroup {
    let mut current: Vec<Elem> = gens.iter().copied().filter(|&x| x != 0).collect();
    loop {
        let h = subgroup_closure(g, &current);
        let mut grew = false;
        for &x in h.generators() {
            for &s in g.generators() {
                let c = g.conj(x, s);
                if !h.contains(c) {
                    current.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            return h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    #[test]
    fn closure_and_generators() {
        let g = Group::abelian(3, &[1, 1]).unwrap();
        let h = subgroup_closure(&g, &[1]);
        assert_eq!(h.order(), 3);
        assert_eq!(h.generators(), &[1]);
        let w = Subgroup::whole(&g, DEFAULT_CAP).unwrap();
        assert_eq!(w.generators().len(), 2);
        assert_eq!(h.intersect(&subgroup_closure(&g, &[3])).order(), 1);
        assert_eq!(h.join(&subgroup_closure(&g, &[3])).order(), 9);
    }

    #[test]
    fn normality_in_dihedral() {
        let g = Group::group_ring_semidirect(2, 1).unwrap();
        // a reflection generates a non-normal subgroup of order 2
        let refl = g.encode(&[1, 0, 0]).unwrap();
        let h = subgroup_closure(&g, &[refl]);
        assert_eq!(h.order(), 2);
        assert!(!h.is_normal());
        let n = normal_closure(&g, &[refl]);
        assert!(n.is_normal());
        assert_eq!(n.order(), 4);
        let w = Subgroup::whole(&g, 64).unwrap();
        assert_eq!(w.commutator_with(&w).order(), 2);
    }

    #[test]
    fn generated_rejects_bad_codes() {
        let g = Group::abelian(2, &[1]).unwrap();
        assert_eq!(Subgroup::generated(&g, &[5]).unwrap_err(), Error::BadElement(5));
    }
}
