//! Linear algebra over `F_p` and Smith reduction over `Z/p^K`.
//!
//! Vectors are plain `Vec<u64>` with entries reduced into `[0, modulus)`.
//! Matrices are row-major and act on column vectors.

use crate::arith::{inv_mod, mul_mod};

pub type Vector = Vec<u64>;
pub type Matrix = Vec<Vec<u64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

pub fn is_identity(m: &Matrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == u64::from(i == j)))
}

pub fn mat_mul(a: &Matrix, b: &Matrix, q: u64) -> Matrix {
    let n = a.len();
    let inner = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = (out[i][j] + mul_mod(aik, b[k][j], q)) % q;
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[u64], q: u64) -> Vector {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0, |acc, (&x, &y)| (acc + mul_mod(x, y, q)) % q)
        })
        .collect()
}

pub fn mat_pow(a: &Matrix, mut e: u64, q: u64) -> Matrix {
    let mut base = a.clone();
    let mut acc = identity(a.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base, q);
        }
        base = mat_mul(&base, &base, q);
        e >>= 1;
    }
    acc
}

pub fn mat_sub_identity(a: &Matrix, q: u64) -> Matrix {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = (row[i] + q - 1) % q;
    }
    out
}

pub fn is_zero(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// Column `j` of `m`.
pub fn column(m: &Matrix, j: usize) -> Vector {
    m.iter().map(|r| r[j]).collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vector], rows: usize) -> Matrix {
    (0..rows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect()
}

/// A subspace of `F_p^n` kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    p: u64,
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(dim: usize, p: u64) -> Self {
        Span {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(dim: usize, p: u64, vs: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut s = Span::new(dim, p);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo the span: zero in every pivot column.
    pub fn reduce(&self, v: &[u64]) -> Vector {
        let p = self.p;
        let mut w: Vector = v.iter().map(|x| x % p).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = w[c];
            if f != 0 {
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi = (*wi + p - mul_mod(f, *ri, p)) % p;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[c], p).expect("nonzero entries are units mod p");
        for x in &mut w {
            *x = mul_mod(*x, inv, p);
        }
        for row in &mut self.rows {
            let f = row[c];
            if f != 0 {
                for (ri, wi) in row.iter_mut().zip(&w) {
                    *ri = (*ri + p - mul_mod(f, *wi, p)) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, w);
        true
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }
}

/// Coefficients expressing `v` in the given (independent) basis, if `v` lies in its span.
pub fn coordinates(basis: &[Vector], v: &[u64], p: u64) -> Option<Vector> {
    let n = v.len();
    let k = basis.len();
    // augmented system: columns = basis vectors, rhs = v
    let mut rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut r: Vector = basis.iter().map(|b| b[i] % p).collect();
            r.push(v[i] % p);
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(i) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p)?;
        for x in &mut rows[r] {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..n {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut out = vec![0; k];
    for (i, &c) in pivot_cols.iter().enumerate() {
        out[c] = rows[i][k];
    }
    Some(out)
}

/// Smith reduction of an integer relation matrix over `Z/p^K`.
///
/// The columns of the input generate a lattice `L` containing `p^K Z^n`; the
/// result describes `Z^n / L` as `⊕ Z/p^{v_t}` together with the row transform
/// that carries a vector to its coordinates.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub p: u64,
    pub k: u32,
    /// Exponent `v_t` of each diagonal entry (rows past the rank get `k`).
    pub valuations: Vec<u32>,
    /// Row transform `U` with `U M V = D`.
    pub transform: Matrix,
}

impl SmithForm {
    pub fn compute(relations: &Matrix, p: u64, k: u32) -> Self {
        let q = p.pow(k);
        let n = relations.len();
        let m = relations.first().map_or(0, Vec::len);
        let mut a: Matrix = relations
            .iter()
            .map(|r| r.iter().map(|x| x % q).collect())
            .collect();
        let mut u = identity(n);
        let mut valuations = Vec::with_capacity(n);
        let val = |x: u64| crate::arith::valuation(x, p);
        for t in 0..n {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    let x = a[i][j];
                    if x != 0 {
                        let v = val(x);
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((v, bi, bj)) = best else {
                valuations.extend(std::iter::repeat_n(k, n - t));
                break;
            };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let pv = p.pow(v);
            let unit = a[t][t] / pv;
            let uinv = inv_mod(unit % q, q).expect("pivot cofactor is a unit");
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = mul_mod(*x, uinv, q);
            }
            for i in 0..n {
                if i == t || a[i][t] == 0 {
                    continue;
                }
                let f = a[i][t] / pv;
                let (at, ut) = (a[t].clone(), u[t].clone());
                for (x, y) in a[i].iter_mut().zip(&at) {
                    *x = (*x + q - mul_mod(f, *y, q)) % q;
                }
                for (x, y) in u[i].iter_mut().zip(&ut) {
                    *x = (*x + q - mul_mod(f, *y, q)) % q;
                }
            }
            for j in t + 1..m {
                if a[t][j] == 0 {
                    continue;
                }
                let f = a[t][j] / pv;
                for row in a.iter_mut() {
                    let ct = row[t];
                    row[j] = (row[j] + q - mul_mod(f, ct, q)) % q;
                }
            }
            valuations.push(v);
        }
        SmithForm {
            p,
            k,
            valuations,
            transform: u,
        }
    }

    /// Exponents of the nontrivial cyclic factors, in row order.
    pub fn factor_exponents(&self) -> Vec<u32> {
        self.valuations.iter().copied().filter(|&v| v > 0).collect()
    }

    /// Coordinates of `x` in the nontrivial cyclic factors.
    pub fn coords(&self, x: &[u64]) -> Vector {
        let q = self.p.pow(self.k);
        let y = mat_vec(&self.transform, x, q);
        y.iter()
            .zip(&self.valuations)
            .filter(|(_, &v)| v > 0)
            .map(|(&yi, &v)| yi % self.p.pow(v))
            .collect()
    }
}
