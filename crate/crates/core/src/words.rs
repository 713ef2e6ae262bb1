//! Words in `G* = ⟨G, t | t^{-1} a t = φ(a)⟩` and Britton reduction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, Group, GroupMap, Subgroup};
use crate::hnn::{pair_embedding_check, HnnPair};

/// Longest word the front end accepts.
pub const MAX_WORD_LEN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// An element of the base group.
    G(Elem),
    /// `t` (`true`) or `t^{-1}` (`false`).
    T(bool),
}

/// A word with adjacent base letters merged and identity letters dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(g: &Group, letters: &[Letter]) -> Word {
        let mut w = Word::default();
        for &l in letters {
            w.push_merged(g, l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of stable letters.
    pub fn t_length(&self) -> usize {
        self.0.iter().filter(|l| matches!(l, Letter::T(_))).count()
    }

    /// The base element when the word has no stable letters.
    pub fn as_base(&self) -> Option<Elem> {
        match self.0.as_slice() {
            [] => Some(0),
            [Letter::G(g)] => Some(*g),
            _ => None,
        }
    }

    fn push_merged(&mut self, g: &Group, l: Letter) {
        match l {
            Letter::G(0) => {}
            Letter::G(x) => match self.0.last_mut() {
                Some(Letter::G(y)) => {
                    let z = g.mul(*y, x);
                    if z == 0 {
                        self.0.pop();
                    } else {
                        *y = z;
                    }
                }
                _ => self.0.push(l),
            },
            Letter::T(_) => self.0.push(l),
        }
    }

    pub fn concat(&self, g: &Group, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push_merged(g, l);
        }
        w
    }

    pub fn inverse(&self, g: &Group) -> Word {
        let letters: Vec<Letter> = self
            .0
            .iter()
            .rev()
            .map(|&l| match l {
                Letter::G(x) => Letter::G(g.inv(x)),
                Letter::T(e) => Letter::T(!e),
            })
            .collect();
        Word::new(g, &letters)
    }

    /// `t^k g t^{-k}` (negative `k` gives `t^{-|k|} g t^{|k|}`).
    pub fn conjugate_by_t_power(g: &Group, x: Elem, k: i64) -> Word {
        let n = k.unsigned_abs() as usize;
        let mut letters = vec![Letter::T(k > 0); n];
        letters.push(Letter::G(x));
        letters.extend(std::iter::repeat_n(Letter::T(k < 0), n));
        Word::new(g, &letters)
    }
}

/// Removes every pinch `t^{-1} a t` (`a ∈ A`) and `t b t^{-1}` (`b ∈ B`),
/// scanning left to right so the leftmost innermost pinch goes first.
pub fn britton_reduce(pair: &HnnPair, w: &Word) -> Word {
    let g = pair.group();
    let mut out = Word::default();
    for &l in w.letters() {
        out.push_merged(g, l);
        let Letter::T(close) = l else { continue };
        let n = out.0.len();
        let (open, middle) = match out.0[..n - 1] {
            [.., Letter::T(e), Letter::G(x)] => (e, Some(x)),
            [.., Letter::T(e)] => (e, None),
            _ => continue,
        };
        if open == close {
            continue;
        }
        let x = middle.unwrap_or(0);
        // t^{-1} x t needs x ∈ A; t x t^{-1} needs x ∈ B
        let replaced = if close { pair.apply(x) } else { pair.apply_inv(x) };
        if let Some(y) = replaced {
            out.0.truncate(n - if middle.is_some() { 3 } else { 2 });
            out.push_merged(g, Letter::G(y));
        }
    }
    out
}

/// `{g ∈ A∩B : t^i g t^{-i} reduces to a base letter for all |i| ≤ bound}`.
pub fn core_britton_oracle(pair: &HnnPair, bound: usize) -> Subgroup {
    let g = pair.group();
    let cap = pair.a_cap_b();
    let keep = cap
        .elements()
        .iter()
        .copied()
        .filter(|&x| {
            (1..=bound as i64).all(|i| {
                [i, -i].iter().all(|&k| {
                    britton_reduce(pair, &Word::conjugate_by_t_power(g, x, k))
                        .as_base()
                        .is_some()
                })
            })
        })
        .collect();
    Subgroup::from_sorted(g, keep)
}

/// The homomorphism `G* → Y` with `g ↦ α(g)` and `t ↦ y`, for an embedding
/// `α` of the pair into `(Y, c_y)`.
#[derive(Clone, Debug)]
pub struct StableLetterHom {
    alpha: GroupMap,
    y: Elem,
}

impl StableLetterHom {
    /// `alpha` must be defined on all of `G`.
    pub fn new(pair: &HnnPair, alpha: &GroupMap, y: Elem) -> Result<StableLetterHom> {
        let target = alpha.codomain();
        target.check(y)?;
        if !alpha.domain().is_whole() || !alpha.domain().group().same(pair.group()) {
            return Err(Error::AmbientMismatch);
        }
        let a_img = alpha.image_of(pair.a())?;
        let conj = GroupMap::from_fn(&a_img, target, |x| target.conj(x, y));
        let b_img = conj.image();
        let dst = HnnPair::new(conj, &b_img)?;
        let report = pair_embedding_check(alpha, pair, &dst)?;
        if !report.ok {
            return Err(Error::Certificate(format!(
                "not an embedding of pairs at element {:?}",
                report.counterexample
            )));
        }
        Ok(StableLetterHom {
            alpha: alpha.clone(),
            y,
        })
    }

    pub fn target(&self) -> &Group {
        self.alpha.codomain()
    }

    pub fn evaluate(&self, w: &Word) -> Elem {
        let y_group = self.alpha.codomain();
        let y_inv = y_group.inv(self.y);
        w.letters().iter().fold(0, |acc, &l| {
            let v = match l {
                Letter::G(x) => self.alpha.apply(x).expect("alpha is total on G"),
                Letter::T(true) => self.y,
                Letter::T(false) => y_inv,
            };
            y_group.mul(acc, v)
        })
    }
}
