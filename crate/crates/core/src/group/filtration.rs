use super::{Group, Subgroup};
use crate::error::{Error, Result};

/// A descending chain of normal subgroups `G = G_1 > ... > G_n = {1}`.
#[derive(Clone, Debug)]
pub struct Filtration {
    group: Group,
    terms: Vec<Subgroup>,
}

impl Filtration {
    pub fn new(terms: Vec<Subgroup>) -> Result<Filtration> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidFiltration("no terms".into()))?;
        let group = first.group().clone();
        if !first.is_whole() {
            return Err(Error::InvalidFiltration("first term is not the whole group".into()));
        }
        if !terms.last().expect("nonempty").is_trivial() {
            return Err(Error::InvalidFiltration("last term is not trivial".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if !t.group().same(&group) {
                return Err(Error::AmbientMismatch);
            }
            t.check_normal()?;
            if i > 0 {
                let prev = &terms[i - 1];
                if t.order() >= prev.order() || !t.is_subset(prev) {
                    return Err(Error::InvalidFiltration(format!(
                        "term {} is not strictly contained in term {}",
                        i + 1,
                        i
                    )));
                }
            }
        }
        Ok(Filtration { group, terms })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Number of terms `n` (the last one trivial).
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// `G_i` with 1-based indexing; trivial past the end.
    pub fn term(&self, i: usize) -> Subgroup {
        assert!(i >= 1, "filtration terms are indexed from 1");
        self.terms
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| Subgroup::trivial(&self.group))
    }

    /// `[G, G_i] ⊆ G_{i+1}` for every `i`.
    pub fn is_central(&self) -> bool {
        let whole = &self.terms[0];
        self.terms
            .windows(2)
            .all(|w| w[0].commutator_with(whole).is_subset(&w[1]))
    }

    /// Central with every layer of order `p`.
    pub fn is_chief(&self) -> bool {
        let p = self.group.p();
        self.terms.windows(2).all(|w| w[0].order() == p * w[1].order()) && self.is_central()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{lower_central_series, subgroup_closure, DEFAULT_CAP};

    #[test]
    fn lcs_is_central_filtration() {
        let g = Group::group_ring_semidirect(2, 1).unwrap();
        let f = Filtration::new(lower_central_series(&g, DEFAULT_CAP).unwrap()).unwrap();
        assert!(f.is_central());
        assert!(!f.is_chief());
        assert_eq!(f.term(5).order(), 1);
    }

    #[test]
    fn invalid_chains_rejected() {
        let g = Group::abelian(3, &[1, 1]).unwrap();
        let w = Subgroup::whole(&g, DEFAULT_CAP).unwrap();
        let h = subgroup_closure(&g, &[1]);
        assert!(Filtration::new(vec![w.clone(), h.clone()]).is_err());
        assert!(Filtration::new(vec![w.clone(), w.clone(), Subgroup::trivial(&g)]).is_err());
        let f = Filtration::new(vec![w, h, Subgroup::trivial(&g)]).unwrap();
        assert!(f.is_chief());
    }
}
