//! Finite p-groups given by multiplication oracles over canonical integer codes.
//!
//! Every element is a tuple of digits with per-coordinate radices; the code of
//! an element is the big-endian mixed-radix integer of its tuple, so the
//! identity (all zeros) has code 0, codes range over `0..order`, and sorting
//! codes sorts tuples lexicographically.

mod filtration;
mod map;
mod series;
mod subgroup;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use filtration::Filtration;
pub use map::GroupMap;
pub use series::{center, lower_central_series, minimal_central_subgroups, quotient, Quotient};
pub use subgroup::{normal_closure, subgroup_closure, Subgroup};

use crate::arith::{check_prime, checked_pow, is_p_power};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Span};

/// Canonical element code.
pub type Elem = u64;

/// Default bound on how many elements an operation may enumerate (3^12).
pub const DEFAULT_CAP: u64 = 531_441;

const TABLE_LIMIT: u64 = 256;

#[derive(Clone)]
pub struct Group(Arc<Inner>);

struct Inner {
    p: u64,
    order: u64,
    radices: Vec<u64>,
    kind: Kind,
    generators: Vec<Elem>,
    table: OnceLock<Option<Box<[u32]>>>,
}

enum Kind {
    Trivial,
    Abelian {
        exponents: Vec<u32>,
    },
    Matrix {
        m: u64,
        /// Induced action of `X^j` on the free coordinates of `V`, for `j < m`.
        powers: Vec<Matrix>,
    },
    GroupRing {
        rank: u32,
        /// `shift[u][s]` is the monomial index of `s + u`.
        shift: Vec<Vec<usize>>,
    },
    Cyclic {
        base: Group,
        m: u64,
        /// `gamma_powers[j][x] = gamma^j(x)`.
        gamma_powers: Vec<Vec<Elem>>,
    },
    Quotient {
        parent: Group,
        reps: Vec<Elem>,
        coset_of: Vec<u32>,
    },
}

impl Group {
    fn build(p: u64, radices: Vec<u64>, kind: Kind, generators: Vec<Elem>) -> Result<Group> {
        let order = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r))
            .ok_or(Error::EncodingOverflow)?;
        if order >= 1 << 63 {
            return Err(Error::EncodingOverflow);
        }
        Ok(Group(Arc::new(Inner {
            p,
            order,
            radices,
            kind,
            generators,
            table: OnceLock::new(),
        })))
    }

    pub fn trivial(p: u64) -> Result<Group> {
        check_prime(p)?;
        Group::build(p, vec![], Kind::Trivial, vec![])
    }

    /// `⊕ Z/p^{e_i}` with componentwise addition.
    pub fn abelian(p: u64, exponents: &[u32]) -> Result<Group> {
        check_prime(p)?;
        if exponents.is_empty() {
            return Err(Error::InvalidParameters("empty exponent list".into()));
        }
        if exponents.contains(&0) {
            return Err(Error::InvalidParameters("exponents must be positive".into()));
        }
        let radices = exponents
            .iter()
            .map(|&e| checked_pow(p, e))
            .collect::<Result<Vec<_>>>()?;
        let d = radices.len();
        let gens = (0..d)
            .map(|i| radices[i + 1..].iter().product::<u64>())
            .collect();
        Group::build(
            p,
            radices,
            Kind::Abelian {
                exponents: exponents.to_vec(),
            },
            gens,
        )
    }

    /// `⟨x | x^m⟩ ⋉ V` with `V = F_p^n / span(relations)` and `x` acting on
    /// `V` from the right through the column action of `action`.
    ///
    /// Elements are `(k, v)` with `v` given by its free coordinates (the
    /// non-pivot columns of the reduced relation span). The product is
    /// `(k, u)(l, v) = (k + l, X^l u + v)`.
    pub fn matrix_semidirect(p: u64, m: u64, action: &Matrix, relations: &[Vec<u64>]) -> Result<Group> {
        check_prime(p)?;
        let n = action.len();
        if n == 0 || action.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameters("action matrix must be square and nonempty".into()));
        }
        if m == 0 || !is_p_power(m, p) {
            return Err(Error::InvalidParameters(format!("cyclic order {m} is not a power of {p}")));
        }
        if relations.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameters("relation length differs from matrix size".into()));
        }
        let x: Matrix = action.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
        let cols: Vec<Vec<u64>> = (0..n).map(|j| linalg::column(&x, j)).collect();
        if Span::from_vectors(n, p, &cols).rank() != n {
            return Err(Error::InvalidParameters("action matrix is not invertible mod p".into()));
        }
        let rel = Span::from_vectors(n, p, relations);
        for r in relations {
            if !rel.contains(&linalg::mat_vec(&x, r, p)) {
                return Err(Error::InvalidParameters(
                    "action does not preserve the relation span".into(),
                ));
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !rel.pivots().contains(c)).collect();
        let induced: Matrix = {
            let cols: Vec<Vec<u64>> = free
                .iter()
                .map(|&c| {
                    let mut e = vec![0; n];
                    e[c] = 1;
                    let img = rel.reduce(&linalg::mat_vec(&x, &e, p));
                    free.iter().map(|&f| img[f]).collect()
                })
                .collect();
            linalg::from_columns(&cols, free.len())
        };
        let mut powers = Vec::with_capacity(m as usize);
        let mut acc = linalg::identity(free.len());
        for _ in 0..m {
            powers.push(acc.clone());
            acc = linalg::mat_mul(&acc, &induced, p);
        }
        if !linalg::is_identity(&acc) {
            return Err(Error::InvalidParameters(format!(
                "action to the power {m} is not the identity on V"
            )));
        }
        let mut radices = vec![m];
        radices.extend(std::iter::repeat_n(p, free.len()));
        let vdim = free.len();
        let mut gens = Vec::new();
        if m > 1 {
            gens.push(p.pow(vdim as u32));
        }
        for i in 0..vdim {
            gens.push(p.pow((vdim - 1 - i) as u32));
        }
        Group::build(p, radices, Kind::Matrix { m, powers }, gens)
    }

    /// `P ⋉ F_p[P]` with `P = (Z/p)^rank` acting on its group ring by
    /// multiplication: `(u, f)(v, g) = (u + v, v·f + g)`.
    ///
    /// Tuples are `(u_1..u_rank, c_0..c_{p^rank - 1})`, where coefficient `c_i`
    /// belongs to the monomial whose exponent vector has base-`p` digits `i`.
    pub fn group_ring_semidirect(p: u64, rank: u32) -> Result<Group> {
        check_prime(p)?;
        if rank == 0 {
            return Err(Error::InvalidParameters("rank must be positive".into()));
        }
        let monomials = checked_pow(p, rank)?;
        let total = (rank as u64)
            .checked_add(monomials)
            .filter(|&t| t <= 64)
            .ok_or(Error::EncodingOverflow)?;
        checked_pow(p, total as u32)?;
        let monos = monomials as usize;
        let digits = |i: usize| -> Vec<u64> {
            let mut out = vec![0; rank as usize];
            let mut x = i as u64;
            for d in out.iter_mut().rev() {
                *d = x % p;
                x /= p;
            }
            out
        };
        let index = |ds: &[u64]| -> usize { ds.iter().fold(0u64, |acc, &d| acc * p + d) as usize };
        let shift = (0..monos)
            .map(|u| {
                let du = digits(u);
                (0..monos)
                    .map(|s| {
                        let ds = digits(s);
                        let sum: Vec<u64> = ds.iter().zip(&du).map(|(a, b)| (a + b) % p).collect();
                        index(&sum)
                    })
                    .collect()
            })
            .collect();
        let mut radices = vec![p; rank as usize];
        radices.extend(std::iter::repeat_n(p, monos));
        let mut gens = Vec::new();
        for i in 0..rank as usize {
            gens.push(p.pow((rank as usize - 1 - i) as u32 + monos as u32));
        }
        // the constant polynomial 1 sits in coefficient slot 0
        gens.push(p.pow(monos as u32 - 1));
        Group::build(p, radices, Kind::GroupRing { rank, shift }, gens)
    }

    /// `Z/m ⋉ X` where the generator acts on `X` from the right via `gamma`
    /// (a full table on the codes of `X`): `(i, x)(j, y) = (i + j, gamma^j(x) y)`.
    pub(crate) fn cyclic_extension(base: &Group, m: u64, gamma: &[Elem]) -> Result<Group> {
        let n = base.order();
        if gamma.len() as u64 != n {
            return Err(Error::InvalidParameters("gamma table must cover the base group".into()));
        }
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur: Vec<Elem> = (0..n).collect();
        for _ in 0..m {
            let next = cur.iter().map(|&x| gamma[x as usize]).collect();
            powers.push(std::mem::replace(&mut cur, next));
        }
        if cur.iter().enumerate().any(|(i, &x)| x != i as u64) {
            return Err(Error::InvalidParameters(format!("gamma^{m} is not the identity")));
        }
        let mut radices = vec![m];
        radices.extend_from_slice(base.radices());
        let mut gens = Vec::new();
        if m > 1 {
            gens.push(n);
        }
        gens.extend_from_slice(base.generators());
        Group::build(
            base.p(),
            radices,
            Kind::Cyclic {
                base: base.clone(),
                m,
                gamma_powers: powers,
            },
            gens,
        )
    }

    pub(crate) fn quotient_group(parent: &Group, reps: Vec<Elem>, coset_of: Vec<u32>) -> Result<Group> {
        let mut gens: Vec<Elem> = parent
            .generators()
            .iter()
            .map(|&g| coset_of[g as usize] as Elem)
            .filter(|&c| c != 0)
            .collect();
        gens.sort_unstable();
        gens.dedup();
        let radices = if reps.len() > 1 { vec![reps.len() as u64] } else { vec![] };
        Group::build(
            parent.p(),
            radices,
            Kind::Quotient {
                parent: parent.clone(),
                reps,
                coset_of,
            },
            gens,
        )
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn radices(&self) -> &[u64] {
        &self.0.radices
    }

    pub fn generators(&self) -> &[Elem] {
        &self.0.generators
    }

    /// Constructor tag.
    pub fn tag(&self) -> &'static str {
        match &self.0.kind {
            Kind::Trivial => "trivial",
            Kind::Abelian { .. } => "abelian",
            Kind::Matrix { .. } => "matrix_semidirect",
            Kind::GroupRing { .. } => "group_ring_semidirect",
            Kind::Cyclic { .. } => "cyclic_extension",
            Kind::Quotient { .. } => "quotient",
        }
    }

    /// Exponent vector when this group was built by [`Group::abelian`].
    pub fn abelian_exponents(&self) -> Option<&[u32]> {
        match &self.0.kind {
            Kind::Abelian { exponents } => Some(exponents),
            _ => None,
        }
    }

    pub fn group_ring_rank(&self) -> Option<u32> {
        match &self.0.kind {
            Kind::GroupRing { rank, .. } => Some(*rank),
            _ => None,
        }
    }

    /// Base group and twisting automorphism of a cyclic extension.
    pub fn cyclic_base(&self) -> Option<(&Group, u64)> {
        match &self.0.kind {
            Kind::Cyclic { base, m, .. } => Some((base, *m)),
            _ => None,
        }
    }

    /// Canonical representative (in the parent) of a quotient element.
    pub fn quotient_rep(&self, e: Elem) -> Option<Elem> {
        match &self.0.kind {
            Kind::Quotient { reps, .. } => reps.get(e as usize).copied(),
            _ => None,
        }
    }

    pub fn same(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn contains(&self, e: Elem) -> bool {
        e < self.order()
    }

    pub fn check(&self, e: Elem) -> Result<Elem> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::BadElement(e))
        }
    }

    pub fn decode(&self, e: Elem) -> Vec<u64> {
        let mut out = vec![0; self.0.radices.len()];
        let mut x = e;
        for (d, &r) in out.iter_mut().zip(&self.0.radices).rev() {
            *d = x % r;
            x /= r;
        }
        out
    }

    pub fn encode(&self, tuple: &[u64]) -> Result<Elem> {
        if tuple.len() != self.0.radices.len() || tuple.iter().zip(&self.0.radices).any(|(d, r)| d >= r) {
            return Err(Error::BadTuple { tuple: tuple.to_vec() });
        }
        Ok(self.pack(tuple))
    }

    fn pack(&self, tuple: &[u64]) -> Elem {
        tuple
            .iter()
            .zip(&self.0.radices)
            .fold(0, |acc, (&d, &r)| acc * r + d)
    }

    pub fn format(&self, e: Elem) -> String {
        let t = self.decode(e);
        let parts: Vec<String> = t.iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    }

    /// Whole universe, refusing groups above `cap`.
    pub fn elements(&self, cap: u64) -> Result<std::ops::Range<Elem>> {
        if self.order() > cap {
            return Err(Error::CapExceeded {
                order: self.order(),
                cap,
            });
        }
        Ok(0..self.order())
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = self.table() {
            return t[(a * self.order() + b) as usize] as Elem;
        }
        self.mul_raw(a, b)
    }

    fn table(&self) -> Option<&[u32]> {
        if self.order() > TABLE_LIMIT {
            return None;
        }
        self.0
            .table
            .get_or_init(|| {
                let n = self.order();
                let mut t = Vec::with_capacity((n * n) as usize);
                for a in 0..n {
                    for b in 0..n {
                        t.push(self.mul_raw(a, b) as u32);
                    }
                }
                Some(t.into_boxed_slice())
            })
            .as_deref()
    }

    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p();
        match &self.0.kind {
            Kind::Trivial => 0,
            Kind::Abelian { .. } => {
                let (x, y) = (self.decode(a), self.decode(b));
                let s: Vec<u64> = x
                    .iter()
                    .zip(&y)
                    .zip(&self.0.radices)
                    .map(|((u, v), r)| (u + v) % r)
                    .collect();
                self.pack(&s)
            }
            Kind::Matrix { m, powers } => {
                let (x, y) = (self.decode(a), self.decode(b));
                let l = y[0];
                let moved = linalg::mat_vec(&powers[l as usize], &x[1..], p);
                let mut out = vec![(x[0] + l) % m];
                out.extend(moved.iter().zip(&y[1..]).map(|(u, v)| (u + v) % p));
                self.pack(&out)
            }
            Kind::GroupRing { rank, shift } => {
                let (x, y) = (self.decode(a), self.decode(b));
                let r = *rank as usize;
                let mut out = vec![0; x.len()];
                for i in 0..r {
                    out[i] = (x[i] + y[i]) % p;
                }
                let v = mono_index(&y[..r], p);
                let perm = &shift[v];
                for s in 0..perm.len() {
                    out[r + perm[s]] = (out[r + perm[s]] + x[r + s]) % p;
                }
                for s in 0..perm.len() {
                    out[r + s] = (out[r + s] + y[r + s]) % p;
                }
                self.pack(&out)
            }
            Kind::Cyclic { base, m, gamma_powers } => {
                let n = base.order();
                let (i, x) = (a / n, a % n);
                let (j, y) = (b / n, b % n);
                let moved = gamma_powers[j as usize][x as usize];
                ((i + j) % m) * n + base.mul(moved, y)
            }
            Kind::Quotient {
                parent,
                reps,
                coset_of,
            } => coset_of[parent.mul(reps[a as usize], reps[b as usize]) as usize] as Elem,
        }
    }

    pub fn inv(&self, a: Elem) -> Elem {
        let p = self.p();
        match &self.0.kind {
            Kind::Trivial => 0,
            Kind::Abelian { .. } => {
                let x = self.decode(a);
                let s: Vec<u64> = x.iter().zip(&self.0.radices).map(|(u, r)| (r - u) % r).collect();
                self.pack(&s)
            }
            Kind::Matrix { m, powers } => {
                let x = self.decode(a);
                let k = (m - x[0]) % m;
                let moved = linalg::mat_vec(&powers[k as usize], &x[1..], p);
                let mut out = vec![k];
                out.extend(moved.iter().map(|u| (p - u) % p));
                self.pack(&out)
            }
            Kind::GroupRing { rank, shift } => {
                let x = self.decode(a);
                let r = *rank as usize;
                let neg: Vec<u64> = x[..r].iter().map(|u| (p - u) % p).collect();
                let perm = &shift[mono_index(&neg, p)];
                let mut out = vec![0; x.len()];
                out[..r].copy_from_slice(&neg);
                for s in 0..perm.len() {
                    out[r + perm[s]] = (p - x[r + s]) % p;
                }
                self.pack(&out)
            }
            Kind::Cyclic { base, m, gamma_powers } => {
                let n = base.order();
                let (i, x) = (a / n, a % n);
                let k = (m - i) % m;
                k * n + gamma_powers[k as usize][base.inv(x) as usize]
            }
            Kind::Quotient {
                parent,
                reps,
                coset_of,
            } => coset_of[parent.inv(reps[a as usize]) as usize] as Elem,
        }
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc = 0;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `g^{-1} x g`.
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn element_order(&self, a: Elem) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A pair of non-commuting generators, if any.
    pub fn noncommuting_generators(&self) -> Option<(Elem, Elem)> {
        let g = self.generators();
        for (i, &x) in g.iter().enumerate() {
            for &y in &g[i + 1..] {
                if self.mul(x, y) != self.mul(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.noncommuting_generators().is_none()
    }

    /// Exhaustive check of the group axioms on the whole universe.
    ///
    /// Associativity uses Light's test against the generators, which is
    /// exhaustive for a generating set.
    pub fn verify_axioms(&self, cap: u64) -> Result<()> {
        let all = self.elements(cap)?;
        for x in all.clone() {
            if self.mul(x, 0) != x || self.mul(0, x) != x {
                return Err(Error::InvalidParameters(format!("identity fails at {x}")));
            }
            let xi = self.inv(x);
            if self.mul(x, xi) != 0 || self.mul(xi, x) != 0 {
                return Err(Error::InvalidParameters(format!("inverse fails at {x}")));
            }
        }
        let closure = subgroup_closure(self, self.generators());
        if closure.order() != self.order() {
            return Err(Error::InvalidParameters("generators do not generate".into()));
        }
        for &g in self.generators() {
            for x in all.clone() {
                let xg = self.mul(x, g);
                for y in all.clone() {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(Error::InvalidParameters(format!(
                            "associativity fails at ({x}, {g}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn mono_index(digits: &[u64], p: u64) -> usize {
    digits.iter().fold(0u64, |acc, &d| acc * p + d) as usize
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, p={}, order={})", self.tag(), self.p(), self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_orders() {
        let g = Group::abelian(3, &[1, 1, 1]).unwrap();
        assert_eq!(g.order(), 27);
        assert!((0..27).all(|x| x == 0 || g.element_order(x) == 3));
        let z9 = Group::abelian(3, &[2]).unwrap();
        assert_eq!(z9.element_order(3), 3);
        assert_eq!(Group::abelian(4, &[1]).unwrap_err(), Error::NotPrime(4));
        assert!(Group::abelian(3, &[]).is_err());
    }

    #[test]
    fn abelian_exponent_by_enumeration() {
        let g = Group::abelian(2, &[2, 1]).unwrap();
        assert_eq!(g.order(), 8);
        let exponent = (0..8).map(|x| g.element_order(x)).max().unwrap();
        assert_eq!(exponent, 4);
    }

    #[test]
    fn codec_roundtrip_and_identity() {
        let g = Group::group_ring_semidirect(3, 2).unwrap();
        assert_eq!(g.decode(0), vec![0; 11]);
        let e = 12345;
        assert_eq!(g.encode(&g.decode(e)).unwrap(), e);
        assert!(g.encode(&[3; 11]).is_err());
    }

    #[test]
    fn matrix_semidirect_shapes() {
        let x = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        let g = Group::matrix_semidirect(3, 3, &x, &[vec![1, 1, 1]]).unwrap();
        assert_eq!(g.order(), 27);
        g.verify_axioms(DEFAULT_CAP).unwrap();
        let c = Group::matrix_semidirect(3, 1, &vec![vec![1]], &[]).unwrap();
        assert_eq!(c.order(), 3);
        assert!(c.is_abelian());
    }

    #[test]
    fn matrix_semidirect_rejects_bad_input() {
        let sing = vec![vec![1, 1], vec![1, 1]];
        assert!(Group::matrix_semidirect(3, 3, &sing, &[]).is_err());
        let swap = vec![vec![0, 1], vec![1, 0]];
        // order 2 action with m = 3
        assert!(Group::matrix_semidirect(3, 3, &swap, &[]).is_err());
        // relation not preserved
        let uni = vec![vec![1, 1], vec![0, 1]];
        assert!(Group::matrix_semidirect(3, 3, &uni, &[vec![0, 1]]).is_err());
        assert!(Group::matrix_semidirect(3, 2, &uni, &[]).is_err());
    }

    #[test]
    fn group_ring_dihedral_of_order_8() {
        let g = Group::group_ring_semidirect(2, 1).unwrap();
        assert_eq!(g.order(), 8);
        g.verify_axioms(DEFAULT_CAP).unwrap();
        assert!(!g.is_abelian());
        // D4: exactly 5 involutions, 2 elements of order 4
        let orders: Vec<u64> = (0..8).map(|x| g.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 5);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 2);
    }

    #[test]
    fn group_ring_conjugation_moves_coefficients() {
        let g = Group::group_ring_semidirect(3, 2).unwrap();
        // (x, 0) and (1, 1)
        let x = g.encode(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let one = g.encode(&[0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        // monomial x sits at index 3 (digits (1,0))
        let xpoly = g.encode(&[0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(g.conj(one, x), xpoly);
    }

    #[test]
    fn group_ring_rejects_huge_rank() {
        assert_eq!(Group::group_ring_semidirect(3, 4).unwrap_err(), Error::EncodingOverflow);
    }
}
