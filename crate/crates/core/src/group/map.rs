use std::collections::VecDeque;
use std::fmt;

use super::{Elem, Group, Subgroup};
use crate::arith::checked_lcm;
use crate::error::{Error, Result};

/// A map from a subgroup into a group, stored as a table aligned with the
/// sorted domain elements.
#[derive(Clone)]
pub struct GroupMap {
    domain: Subgroup,
    codomain: Group,
    images: Vec<Elem>,
}

impl GroupMap {
    /// Extends generator images to a homomorphism on `domain`.
    ///
    /// Every edge `x -> x·g` of the Cayley graph is checked, so success means
    /// the map is well defined and satisfies `f(xg) = f(x) f(g)` on generators,
    /// which makes it a homomorphism.
    pub fn from_generator_images(
        domain: &Subgroup,
        codomain: &Group,
        gens: &[Elem],
        images: &[Elem],
    ) -> Result<GroupMap> {
        if gens.len() != images.len() {
            return Err(Error::InvalidParameters("generator and image counts differ".into()));
        }
        let g = domain.group();
        for &x in gens {
            if !domain.contains(x) {
                return Err(Error::NotInSubgroup(x));
            }
        }
        for &y in images {
            codomain.check(y)?;
        }
        const UNSET: Elem = Elem::MAX;
        let mut table = vec![UNSET; domain.elements().len()];
        table[0] = 0;
        let mut queue = VecDeque::from([0 as Elem]);
        while let Some(x) = queue.pop_front() {
            let fx = table[domain.position(x).expect("closure stays in domain")];
            for (&s, &fs) in gens.iter().zip(images) {
                let y = g.mul(x, s);
                let fy = codomain.mul(fx, fs);
                let slot = &mut table[domain.position(y).expect("generators lie in domain")];
                if *slot == UNSET {
                    *slot = fy;
                    queue.push_back(y);
                } else if *slot != fy {
                    return Err(Error::IllDefinedMap(y));
                }
            }
        }
        if table.contains(&UNSET) {
            return Err(Error::InvalidParameters("generators do not generate the domain".into()));
        }
        Ok(GroupMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images: table,
        })
    }

    /// Tabulates `f` on the domain without checking homomorphy.
    pub fn from_fn(domain: &Subgroup, codomain: &Group, f: impl Fn(Elem) -> Elem) -> GroupMap {
        let images = domain.elements().iter().map(|&x| f(x)).collect();
        GroupMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        }
    }

    pub(crate) fn from_table(domain: &Subgroup, codomain: &Group, images: Vec<Elem>) -> GroupMap {
        debug_assert_eq!(images.len(), domain.elements().len());
        GroupMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        }
    }

    pub fn identity_on(domain: &Subgroup) -> GroupMap {
        GroupMap::from_table(domain, domain.group(), domain.elements().to_vec())
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: Elem) -> Option<Elem> {
        self.domain.position(x).map(|i| self.images[i])
    }

    pub fn at(&self, x: Elem) -> Result<Elem> {
        self.apply(x).ok_or(Error::NotInSubgroup(x))
    }

    /// Pairs `(x, f(x))` in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.domain.elements().iter().copied().zip(self.images.iter().copied())
    }

    pub fn check_homomorphism(&self) -> Result<()> {
        let g = self.domain.group();
        let h = &self.codomain;
        if self.images.iter().any(|&y| !h.contains(y)) {
            return Err(Error::NotSurjective);
        }
        for (x, fx) in self.pairs() {
            for &s in self.domain.generators() {
                let fs = self.apply(s).expect("generator in domain");
                let xs = g.mul(x, s);
                if self.apply(xs) != Some(h.mul(fx, fs)) {
                    return Err(Error::NotHomomorphism { x, y: s });
                }
            }
        }
        Ok(())
    }

    pub fn check_injective(&self) -> Result<()> {
        let mut sorted: Vec<(Elem, Elem)> = self.pairs().map(|(x, y)| (y, x)).collect();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::NotInjective(w[0].1, w[1].1));
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.check_injective().is_ok()
    }

    /// Image of a subgroup contained in the domain.
    pub fn image_of(&self, s: &Subgroup) -> Result<Subgroup> {
        let mut v = Vec::with_capacity(s.elements().len());
        for &x in s.elements() {
            v.push(self.at(x)?);
        }
        v.sort_unstable();
        v.dedup();
        Ok(Subgroup::from_sorted(&self.codomain, v))
    }

    pub fn image(&self) -> Subgroup {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        Subgroup::from_sorted(&self.codomain, v)
    }

    pub fn kernel(&self) -> Subgroup {
        let v = self.pairs().filter(|&(_, y)| y == 0).map(|(x, _)| x).collect();
        Subgroup::from_sorted(self.domain.group(), v)
    }

    /// Domain elements mapped into `s`.
    pub fn preimage(&self, s: &Subgroup) -> Subgroup {
        let v = self.pairs().filter(|&(_, y)| s.contains(y)).map(|(x, _)| x).collect();
        Subgroup::from_sorted(self.domain.group(), v)
    }

    pub fn restrict(&self, s: &Subgroup) -> Result<GroupMap> {
        let mut images = Vec::with_capacity(s.elements().len());
        for &x in s.elements() {
            images.push(self.at(x)?);
        }
        Ok(GroupMap::from_table(s, &self.codomain, images))
    }

    /// Inverse of an injective map, defined on its image.
    pub fn inverse(&self) -> Result<GroupMap> {
        self.check_injective()?;
        let mut pairs: Vec<(Elem, Elem)> = self.pairs().map(|(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        let dom = Subgroup::from_sorted(&self.codomain, pairs.iter().map(|p| p.0).collect());
        Ok(GroupMap::from_table(
            &dom,
            self.domain.group(),
            pairs.iter().map(|p| p.1).collect(),
        ))
    }

    /// `next ∘ self`, defined where the composite makes sense (requires the
    /// image of `self` to lie in the domain of `next`).
    pub fn then(&self, next: &GroupMap) -> Result<GroupMap> {
        let mut images = Vec::with_capacity(self.images.len());
        for &y in &self.images {
            images.push(next.at(y)?);
        }
        Ok(GroupMap::from_table(&self.domain, &next.codomain, images))
    }

    /// Order of a permutation of the domain, by lcm of cycle lengths.
    pub fn permutation_order(&self) -> Result<u64> {
        let n = self.images.len();
        let mut index = Vec::with_capacity(n);
        for &y in &self.images {
            index.push(self.domain.position(y).ok_or(Error::NotAutomorphism)?);
        }
        let mut seen = vec![false; n];
        let mut order = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = index[i];
                len += 1;
            }
            if i != start {
                return Err(Error::NotAutomorphism);
            }
            order = checked_lcm(order, len)?;
        }
        Ok(order)
    }

    pub fn agrees_with(&self, other: &GroupMap) -> bool {
        self.domain == other.domain && self.images == other.images
    }
}

impl fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupMap(domain order {})", self.domain.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{subgroup_closure, DEFAULT_CAP};

    #[test]
    fn generator_extension() {
        let g = Group::abelian(3, &[1, 1]).unwrap();
        let w = Subgroup::whole(&g, DEFAULT_CAP).unwrap();
        // swap the two coordinates
        let f = GroupMap::from_generator_images(&w, &g, &[3, 1], &[1, 3]).unwrap();
        f.check_homomorphism().unwrap();
        assert!(f.is_injective());
        assert_eq!(f.permutation_order().unwrap(), 2);
        assert_eq!(f.apply(4), Some(4));
        let inv = f.inverse().unwrap();
        assert!(f.then(&inv).unwrap().agrees_with(&GroupMap::identity_on(&w)));
    }

    #[test]
    fn ill_defined_images_are_rejected() {
        let g = Group::abelian(3, &[2]).unwrap();
        let h = subgroup_closure(&g, &[3]);
        let w = Subgroup::whole(&g, DEFAULT_CAP).unwrap();
        // Z/3 -> Z/9 sending generator to an element of order 9
        let err = GroupMap::from_generator_images(&h, &g, &[3], &[1]).unwrap_err();
        assert!(matches!(err, Error::IllDefinedMap(_)));
        let ok = GroupMap::from_generator_images(&w, &g, &[1], &[3]).unwrap();
        assert_eq!(ok.kernel().order(), 3);
        assert_eq!(ok.image().order(), 3);
        assert!(matches!(ok.permutation_order(), Err(Error::NotAutomorphism)));
    }

    #[test]
    fn non_homomorphism_detected() {
        let g = Group::abelian(2, &[1, 1]).unwrap();
        let w = Subgroup::whole(&g, DEFAULT_CAP).unwrap();
        let f = GroupMap::from_fn(&w, &g, |x| if x == 0 { 0 } else { 1 });
        assert!(matches!(f.check_homomorphism(), Err(Error::NotHomomorphism { .. })));
    }
}
