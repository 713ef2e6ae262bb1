use super::{Elem, Group, Subgroup};
use crate::error::{Error, Result};

/// A quotient `G/N` together with the projection data.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    pub parent: Group,
    pub kernel: Subgroup,
    coset_of: Vec<u32>,
}

impl Quotient {
    pub fn project(&self, x: Elem) -> Elem {
        self.coset_of[x as usize] as Elem
    }

    /// Least parent element of the coset.
    pub fn lift(&self, c: Elem) -> Elem {
        self.group.quotient_rep(c).unwrap_or(0)
    }

    pub fn image(&self, s: &Subgroup) -> Subgroup {
        let mut v: Vec<Elem> = s.elements().iter().map(|&x| self.project(x)).collect();
        v.sort_unstable();
        v.dedup();
        Subgroup::from_sorted(&self.group, v)
    }

    /// Full preimage in the parent of a subgroup of the quotient.
    pub fn preimage(&self, s: &Subgroup) -> Subgroup {
        let v = (0..self.parent.order())
            .filter(|&x| s.contains(self.project(x)))
            .collect();
        Subgroup::from_sorted(&self.parent, v)
    }
}

/// `G/N` for a normal subgroup `N`, with cosets numbered by their least member.
pub fn quotient(n: &Subgroup, cap: u64) -> Result<Quotient> {
    n.check_normal()?;
    let g = n.group();
    let all = g.elements(cap)?;
    if g.order() > u32::MAX as u64 {
        return Err(Error::CapExceeded { order: g.order(), cap: u32::MAX as u64 });
    }
    const UNSET: u32 = u32::MAX;
    let mut coset_of = vec![UNSET; g.order() as usize];
    let mut reps = Vec::new();
    for x in all {
        if coset_of[x as usize] != UNSET {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &k in n.elements() {
            coset_of[g.mul(x, k) as usize] = c;
        }
    }
    let qg = Group::quotient_group(g, reps, coset_of.clone())?;
    Ok(Quotient {
        group: qg,
        parent: g.clone(),
        kernel: n.clone(),
        coset_of,
    })
}

/// `γ_1 = G, γ_{k+1} = [γ_k, G]` down to the trivial group.
pub fn lower_central_series(g: &Group, cap: u64) -> Result<Vec<Subgroup>> {
    let whole = Subgroup::whole(g, cap)?;
    let mut series = vec![whole.clone()];
    loop {
        let last = series.last().expect("nonempty");
        if last.is_trivial() {
            return Ok(series);
        }
        let next = last.commutator_with(&whole);
        if next == *last {
            return Err(Error::NotNilpotent);
        }
        series.push(next);
    }
}

pub fn center(g: &Group, cap: u64) -> Result<Subgroup> {
    let all = g.elements(cap)?;
    let v = all
        .filter(|&z| g.generators().iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .collect();
    Ok(Subgroup::from_sorted(g, v))
}

/// Central subgroups of order `p`, one per line of `Ω_1(Z(G))`.
pub fn minimal_central_subgroups(g: &Group, cap: u64) -> Result<Vec<Subgroup>> {
    let z = center(g, cap)?;
    let p = g.p();
    let mut out: Vec<Subgroup> = Vec::new();
    for &x in z.elements() {
        if x == 0 || g.pow(x, p) != 0 {
            continue;
        }
        let c = super::subgroup_closure(g, &[x]);
        if c.elements()[1] == x {
            out.push(c);
        }
    }
    Ok(out)
}
