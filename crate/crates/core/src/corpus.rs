//! Worked examples as executable fixtures. Each fixture is an HNN pair plus a
//! list of facts; a fact recomputes an observation from scratch and compares
//! it with the expected value.

use std::fmt;

use serde::Serialize;

use crate::arith::check_prime;
use crate::error::{Error, Result};
use crate::filtrations::{decide_chief, is_compatible, obstruction_full, obstruction_toplevel, FullObstruction};
use crate::group::{lower_central_series, Elem, Filtration, Group, Subgroup, DEFAULT_CAP};
use crate::hnn::{core_fixpoint, induced_pair, twisted_pair, HnnPair};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Stated outright for the example.
    Stated,
    /// Computed by hand or by a separate routine from the definitions.
    Derived,
    /// Observed and reported, not asserted.
    Recorded,
}

type Check = Box<dyn Fn(&HnnPair) -> Result<String> + Send + Sync>;

pub struct Fact {
    pub name: &'static str,
    pub claim: String,
    pub source: Source,
    /// `None` for recorded facts.
    pub expected: Option<String>,
    check: Check,
}

impl fmt::Debug for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fact")
            .field("name", &self.name)
            .field("expected", &self.expected)
            .finish()
    }
}

fn fact(
    name: &'static str,
    claim: impl Into<String>,
    source: Source,
    expected: Option<String>,
    check: impl Fn(&HnnPair) -> Result<String> + Send + Sync + 'static,
) -> Fact {
    Fact {
        name,
        claim: claim.into(),
        source,
        expected,
        check: Box::new(check),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactOutcome {
    pub name: String,
    pub claim: String,
    pub source: Source,
    pub expected: Option<String>,
    pub observed: String,
    pub passed: bool,
}

#[derive(Debug)]
pub struct Fixture {
    pub name: String,
    pub summary: String,
    pub pair: HnnPair,
    pub facts: Vec<Fact>,
}

impl Fixture {
    pub fn verify(&self) -> Vec<FactOutcome> {
        self.facts
            .iter()
            .map(|f| {
                let (observed, ok) = match (f.check)(&self.pair) {
                    Ok(s) => {
                        let ok = f.expected.as_ref().is_none_or(|e| *e == s);
                        (s, ok)
                    }
                    Err(e) => (format!("error: {e}"), false),
                };
                FactOutcome {
                    name: f.name.to_string(),
                    claim: f.claim.clone(),
                    source: f.source,
                    expected: f.expected.clone(),
                    observed,
                    passed: ok,
                }
            })
            .collect()
    }
}

fn unit(g: &Group, tuple: &[u64]) -> Elem {
    g.encode(tuple).expect("fixture tuples are in range")
}

fn multiplicative_order(m: u64, p: u64) -> u64 {
    let mut x = m % p;
    let mut k = 1;
    while x != 1 {
        x = x * m % p;
        k += 1;
    }
    k
}

/// The scalar `m` with `ψ(g) = g^m` on a cyclic group generated by `g`.
fn scalar_of(pair: &HnnPair, gen: Elem) -> Result<String> {
    let g = pair.group();
    let img = pair.apply(gen).ok_or(Error::NotInSubgroup(gen))?;
    (0..g.p())
        .find(|&m| g.pow(gen, m) == img)
        .map(|m| format!("multiplication by {m}"))
        .ok_or_else(|| Error::OracleDisagreement("not a scalar map".into()))
}

/// `G = F_p^3`, `A = {(a1, a2, 0)}`, `B = {(b1, 0, b2)}`,
/// `φ(a1, a2, 0) = (x a1, 0, y a1 + z a2)`; `K = {(0, k1, k2)}`.
pub fn rank3_quotient_core(p: u64, x: u64, y: u64, z: u64) -> Result<Fixture> {
    check_prime(p)?;
    let (x, y, z) = (x % p, y % p, z % p);
    if x == 0 || z == 0 {
        return Err(Error::InvalidParameters("x and z must be nonzero mod p".into()));
    }
    let g = Group::abelian(p, &[1, 1, 1])?;
    let e = |v: [u64; 3]| unit(&g, &v);
    let pair = HnnPair::from_generators(
        &g,
        &[e([1, 0, 0]), e([0, 1, 0])],
        &[e([x, 0, y]), e([0, 0, z])],
        Some(&[e([1, 0, 0]), e([0, 0, 1])]),
    )?;
    let k = Subgroup::generated(&g, &[e([0, 1, 0]), e([0, 0, 1])])?;
    let e1 = e([1, 0, 0]);
    let mut facts = vec![fact(
        "intersection",
        "A and B meet in the first coordinate line",
        Source::Stated,
        Some(p.to_string()),
        |pair| Ok(pair.a_cap_b().order().to_string()),
    )];
    if y != 0 {
        facts.push(fact(
            "core_trivial",
            "with y nonzero, φ moves the shared line off itself, so the core is trivial",
            Source::Stated,
            Some("1".into()),
            |pair| Ok(core_fixpoint(pair)?.order().to_string()),
        ));
    } else {
        facts.push(fact(
            "core_is_intersection",
            "with y = 0, φ preserves the shared line and the core is all of A∩B",
            Source::Derived,
            Some(p.to_string()),
            |pair| Ok(core_fixpoint(pair)?.order().to_string()),
        ));
    }
    let k1 = k.clone();
    facts.push(fact(
        "kernel_compatible",
        "φ carries A∩K onto B∩K",
        Source::Stated,
        Some("true".into()),
        move |pair| Ok(pair.is_compatible_with(&k1).to_string()),
    ));
    let k2 = k.clone();
    facts.push(fact(
        "quotient_core",
        "the induced pair on G/K has the whole quotient, of order p, as its core",
        Source::Stated,
        Some(format!("{p} of {p}")),
        move |pair| {
            let ind = induced_pair(pair, &k2, DEFAULT_CAP)?;
            let core = core_fixpoint(&ind.pair)?;
            Ok(format!("{} of {}", core.order(), ind.quotient.group.order()))
        },
    ));
    let k3 = k.clone();
    facts.push(fact(
        "quotient_scalar",
        "on G/K the induced automorphism is multiplication by x",
        Source::Stated,
        Some(format!("multiplication by {x}")),
        move |pair| {
            let ind = induced_pair(pair, &k3, DEFAULT_CAP)?;
            scalar_of(&ind.pair, ind.quotient.project(e1))
        },
    ));
    facts.push(fact(
        "quotient_order",
        "the induced automorphism has the multiplicative order of x mod p",
        Source::Derived,
        Some(multiplicative_order(x, p).to_string()),
        move |pair| {
            let ind = induced_pair(pair, &k, DEFAULT_CAP)?;
            Ok(core_fixpoint(&ind.pair)?.automorphism_order().to_string())
        },
    ));
    Ok(Fixture {
        name: format!("rank3_quotient_core:{p},{x},{y},{z}"),
        summary: "abelian pair with trivial core whose quotient by a compatible subgroup has nontrivial core".into(),
        pair,
        facts,
    })
}

/// `G = F_p^4`, `A = {(a1, a2, a3, 0)}`, `B = {(b1, 0, b2, b3)}`,
/// `φ(a1, a2, a3, 0) = (a a1, 0, b a1 + a2, c a1 + a3)`; `L = {(0, d1, d2, d3)}`.
pub fn rank4_quotient_core(p: u64, a: u64, b: u64, c: u64) -> Result<Fixture> {
    check_prime(p)?;
    let (a, b, c) = (a % p, b % p, c % p);
    if a == 0 {
        return Err(Error::InvalidParameters("a must be nonzero mod p".into()));
    }
    let g = Group::abelian(p, &[1, 1, 1, 1])?;
    let e = |v: [u64; 4]| unit(&g, &v);
    let pair = HnnPair::from_generators(
        &g,
        &[e([1, 0, 0, 0]), e([0, 1, 0, 0]), e([0, 0, 1, 0])],
        &[e([a, 0, b, c]), e([0, 0, 1, 0]), e([0, 0, 0, 1])],
        Some(&[e([1, 0, 0, 0]), e([0, 0, 1, 0]), e([0, 0, 0, 1])]),
    )?;
    let l = Subgroup::generated(&g, &[e([0, 1, 0, 0]), e([0, 0, 1, 0]), e([0, 0, 0, 1])])?;
    let mut facts = vec![fact(
        "intersection",
        "A∩B is the plane spanned by the first and third coordinates",
        Source::Stated,
        Some((p * p).to_string()),
        |pair| Ok(pair.a_cap_b().order().to_string()),
    )];
    // φ(1, 0, -c, 0) = (a, 0, b, 0), a multiple of (1, 0, -c, 0) exactly when b = -ac
    let exceptional = c != 0 && (b + a * c) % p == 0;
    if exceptional {
        let line = e([1, 0, (p - c) % p, 0]);
        let ord = multiplicative_order(a, p);
        facts.push(fact(
            "core_exceptional",
            "when b = -ac the line through (1, 0, -c, 0) is invariant, so the core has order p and φ acts on it as multiplication by a",
            Source::Derived,
            Some(format!("{p} {ord} true")),
            move |pair| {
                let core = core_fixpoint(pair)?;
                Ok(format!("{} {} {}", core.order(), core.automorphism_order(), core.subgroup.contains(line)))
            },
        ));
    }
    if c != 0 && !exceptional {
        facts.push(fact(
            "core_trivial",
            "with c nonzero and b + ac nonzero the core is trivial",
            Source::Stated,
            Some("1".into()),
            |pair| Ok(core_fixpoint(pair)?.order().to_string()),
        ));
    }
    if c != 0 {
        let l1 = l.clone();
        facts.push(fact(
            "quotient_core_nontrivial",
            "the quotient by L is compatible and its induced pair has a nontrivial core",
            Source::Stated,
            Some("true".into()),
            move |pair| {
                let ind = induced_pair(pair, &l1, DEFAULT_CAP)?;
                Ok((!core_fixpoint(&ind.pair)?.subgroup.is_trivial()).to_string())
            },
        ));
    } else {
        facts.push(fact(
            "core_snapshot",
            "with c = 0 the core order is only recorded",
            Source::Recorded,
            None,
            |pair| Ok(core_fixpoint(pair)?.order().to_string()),
        ));
    }
    facts.push(fact(
        "kernel_compatible",
        "φ carries A∩L onto B∩L",
        Source::Derived,
        Some("true".into()),
        move |pair| Ok(pair.is_compatible_with(&l).to_string()),
    ));
    Ok(Fixture {
        name: format!("rank4_quotient_core:{p},{a},{b},{c}"),
        summary: "rank four variant: quotient by the subgroup of a shared element keeps a core".into(),
        pair,
        facts,
    })
}

/// `Z/p` with `A = B = G` and `φ` multiplication by `m`.
pub fn scalar_automorphism(p: u64, m: u64) -> Result<Fixture> {
    check_prime(p)?;
    let m = m % p;
    if m == 0 {
        return Err(Error::InvalidParameters("m must be a unit mod p".into()));
    }
    let g = Group::abelian(p, &[1])?;
    let pair = HnnPair::from_generators(&g, &[1], &[m], None)?;
    let ord = multiplicative_order(m, p);
    let yes = crate::arith::is_p_power(ord, p);
    let facts = vec![
        fact(
            "order",
            "φ restricted to the core has the multiplicative order of m",
            Source::Derived,
            Some(ord.to_string()),
            |pair| Ok(core_fixpoint(pair)?.automorphism_order().to_string()),
        ),
        fact(
            "verdict",
            "with A = B = G the extension is residually p exactly when φ has p-power order",
            Source::Stated,
            Some(if yes { "residually_p" } else { "not_residually_p" }.into()),
            |pair| Ok(decide_chief(pair, DEFAULT_CAP)?.verdict.as_str().to_string()),
        ),
    ];
    Ok(Fixture {
        name: format!("scalar_automorphism:{p},{m}"),
        summary: "cyclic group with an everywhere-defined scalar automorphism".into(),
        pair,
        facts,
    })
}

/// Element `(x^i y^j, f)` of `P ⋉ F_3[P]`, `P = ⟨x, y⟩`, with `f` listed as
/// `((i, j), coefficient)` terms.
pub fn wreath_element(g: &Group, u: (u64, u64), terms: &[((u64, u64), u64)]) -> Elem {
    let mut t = vec![0u64; 11];
    t[0] = u.0 % 3;
    t[1] = u.1 % 3;
    for &((i, j), c) in terms {
        let slot = 2 + (3 * (i % 3) + j % 3) as usize;
        t[slot] = (t[slot] + c) % 3;
    }
    unit(g, &t)
}

/// `G = F_3 ≀ (Z/3)^2`, `A = ⟨x⟩ ⋉ F_3[⟨x⟩]`, `B = ⟨y⟩ ⋉ F_3[⟨y⟩]`,
/// `φ(x^n, f(x)) = (y^n, 2 y^{-1} f(y))`.
pub fn wreath_twist() -> Result<Fixture> {
    let g = Group::group_ring_semidirect(3, 2)?;
    let x = wreath_element(&g, (1, 0), &[]);
    let y = wreath_element(&g, (0, 1), &[]);
    let one = wreath_element(&g, (0, 0), &[((0, 0), 1)]);
    let pair = HnnPair::from_generators(
        &g,
        &[x, one],
        &[y, wreath_element(&g, (0, 0), &[((0, 2), 2)])],
        Some(&[y, one]),
    )?;
    let facts = vec![
        fact(
            "group_order",
            "G has order 3^11",
            Source::Derived,
            Some(3u64.pow(11).to_string()),
            |pair| Ok(pair.group().order().to_string()),
        ),
        fact(
            "subgroup_orders",
            "A and B have order 81 and meet in the constants",
            Source::Derived,
            Some("81 81 3".into()),
            |pair| Ok(format!("{} {} {}", pair.a().order(), pair.b().order(), pair.a_cap_b().order())),
        ),
        fact(
            "lcs_compatible",
            "the pair is compatible with the lower central series",
            Source::Stated,
            Some("true".into()),
            |pair| {
                let lcs = lower_central_series(pair.group(), DEFAULT_CAP)?;
                Ok(is_compatible(pair, &Filtration::new(lcs)?).to_string())
            },
        ),
        fact(
            "core_trivial",
            "φ sends the constants to multiples of y^-1, so the core is trivial",
            Source::Stated,
            Some("1".into()),
            |pair| Ok(core_fixpoint(pair)?.order().to_string()),
        ),
        fact(
            "twist_doubles_constants",
            "twisting by conjugation with (x,0) makes the map double every constant",
            Source::Stated,
            Some("true".into()),
            move |pair| {
                let psi = twisted_pair(pair, x, pair.group().identity())?;
                let g = pair.group();
                let ok = (0..3).all(|v| {
                    let c = wreath_element(g, (0, 0), &[((0, 0), v)]);
                    psi.apply(c) == Some(wreath_element(g, (0, 0), &[((0, 0), 2 * v)]))
                });
                Ok(ok.to_string())
            },
        ),
        fact(
            "twisted_core",
            "the twisted map has the constants as core and acts there with order 2",
            Source::Stated,
            Some("3 2".into()),
            move |pair| {
                let psi = twisted_pair(pair, x, pair.group().identity())?;
                let core = core_fixpoint(&psi)?;
                Ok(format!("{} {}", core.order(), core.automorphism_order()))
            },
        ),
        fact(
            "toplevel_violation",
            "the twist scan finds the violation at a = (x,0), b = 1, so the extension is not residually 3",
            Source::Derived,
            Some(format!("{} {} 2", g.format(x), g.format(g.identity()))),
            |pair| {
                let g = pair.group();
                match obstruction_toplevel(pair)? {
                    Some(v) => Ok(format!("{} {} {}", g.format(v.a), g.format(v.b), v.order)),
                    None => Ok("none".into()),
                }
            },
        ),
    ];
    Ok(Fixture {
        name: "wreath_twist".into(),
        summary: "wreath product pair with trivial core refuted by a twisted core".into(),
        pair,
        facts,
    })
}

/// `Z/3 ⋉ F_3^3/⟨(1,1,1)⟩` with the cyclic coordinate shift as action.
pub fn cyclic_shift_group() -> Result<Group> {
    let shift = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
    Group::matrix_semidirect(3, 3, &shift, &[vec![1, 1, 1]])
}

/// Element `(x^k, v)` of [`cyclic_shift_group`] with `v` a vector in `F_3^3`.
pub fn cyclic_shift_element(g: &Group, k: u64, v: [u64; 3]) -> Elem {
    // reduce modulo (1,1,1); the free coordinates are the last two
    let (a, b, c) = (v[0] % 3, v[1] % 3, v[2] % 3);
    unit(g, &[k % 3, (b + 3 - a) % 3, (c + 3 - a) % 3])
}

/// `A = ⟨(1,0,0)⟩`, `B = ⟨(1,1,-1)⟩`, `φ(a) = 2b`.
pub fn cyclic_shift() -> Result<Fixture> {
    let g = cyclic_shift_group()?;
    let a = cyclic_shift_element(&g, 0, [1, 0, 0]);
    let b = cyclic_shift_element(&g, 0, [1, 1, 2]);
    let pair = HnnPair::from_generators(&g, &[a], &[g.pow(b, 2)], None)?;
    let sum_zero: Vec<Elem> = {
        let mut v: Vec<Elem> = (0..3)
            .flat_map(|w1| (0..3).map(move |w2| [w1, w2, (6 - w1 - w2) % 3]))
            .map(|w| cyclic_shift_element(&g, 0, w))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let facts = vec![
        fact(
            "group_order",
            "G has order 27",
            Source::Stated,
            Some("27".into()),
            |pair| Ok(pair.group().order().to_string()),
        ),
        fact(
            "commutator_subgroup",
            "[G,G] consists of the sum-zero vectors and has order 3",
            Source::Stated,
            Some(format!("true {}", sum_zero.len())),
            move |pair| {
                let lcs = lower_central_series(pair.group(), DEFAULT_CAP)?;
                Ok(format!("{} {}", lcs[1].elements() == sum_zero.as_slice(), lcs[1].order()))
            },
        ),
        fact(
            "lcs_length",
            "the third lower central term is trivial",
            Source::Stated,
            Some("27 3 1".into()),
            |pair| {
                let lcs = lower_central_series(pair.group(), DEFAULT_CAP)?;
                Ok(lcs.iter().map(|s| s.order().to_string()).collect::<Vec<_>>().join(" "))
            },
        ),
        fact(
            "same_abelianization",
            "a and b agree modulo [G,G]",
            Source::Stated,
            Some("true".into()),
            move |pair| {
                let lcs = lower_central_series(pair.group(), DEFAULT_CAP)?;
                let g = pair.group();
                Ok(lcs[1].contains(g.mul(a, g.inv(b))).to_string())
            },
        ),
        fact(
            "disjoint",
            "A and B meet trivially, so the core is trivial",
            Source::Stated,
            Some("1 1".into()),
            |pair| Ok(format!("{} {}", pair.a_cap_b().order(), core_fixpoint(pair)?.order())),
        ),
        fact(
            "lcs_compatible",
            "the pair is compatible with the lower central series",
            Source::Stated,
            Some("true".into()),
            |pair| {
                let lcs = lower_central_series(pair.group(), DEFAULT_CAP)?;
                Ok(is_compatible(pair, &Filtration::new(lcs)?).to_string())
            },
        ),
        fact(
            "full_refutation",
            "no central compatible filtration passes the twisted-core test; failures occur only at levels (1,2) and (1,3)",
            Source::Stated,
            Some("refuted 1,2 1,3".into()),
            |pair| match obstruction_full(pair, DEFAULT_CAP)? {
                FullObstruction::Refuted(r) => Ok(format!(
                    "refuted {}",
                    r.failures.keys().cloned().collect::<Vec<_>>().join(" ")
                )),
                FullObstruction::Inconclusive(_) => Ok("inconclusive".into()),
            },
        ),
        fact(
            "chief_search",
            "the exhaustive chief search finds no compatible chief filtration",
            Source::Derived,
            Some("not_residually_p".into()),
            |pair| Ok(decide_chief(pair, DEFAULT_CAP)?.verdict.as_str().to_string()),
        ),
    ];
    Ok(Fixture {
        name: "cyclic_shift".into(),
        summary: "order 27 pair with disjoint A and B refuted only by the full filtration search".into(),
        pair,
        facts,
    })
}

pub const FIXTURE_NAMES: &[&str] = &[
    "rank3_quotient_core",
    "rank4_quotient_core",
    "scalar_automorphism",
    "wreath_twist",
    "cyclic_shift",
];

fn parse_params(s: &str, n: usize) -> Result<Vec<u64>> {
    let v: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameters(format!("fixture parameters: {e}")))?;
    if v.len() != n {
        return Err(Error::InvalidParameters(format!("expected {n} fixture parameters")));
    }
    Ok(v)
}

/// Looks up `name` or `name:params` (comma-separated).
pub fn by_name(spec: &str) -> Result<Fixture> {
    let (name, params) = spec.split_once(':').map_or((spec, None), |(n, p)| (n, Some(p)));
    let need = |n: usize, default: &str| parse_params(params.unwrap_or(default), n);
    match name {
        "rank3_quotient_core" => {
            let v = need(4, "3,1,1,1")?;
            rank3_quotient_core(v[0], v[1], v[2], v[3])
        }
        "rank4_quotient_core" => {
            let v = need(4, "3,1,0,1")?;
            rank4_quotient_core(v[0], v[1], v[2], v[3])
        }
        "scalar_automorphism" => {
            let v = need(2, "3,2")?;
            scalar_automorphism(v[0], v[1])
        }
        "wreath_twist" => wreath_twist(),
        "cyclic_shift" => cyclic_shift(),
        _ => Err(Error::InvalidParameters(format!("unknown fixture {name}"))),
    }
}

/// Every fixture with the parameter choices checked by default.
pub fn all_fixtures() -> Result<Vec<Fixture>> {
    Ok(vec![
        rank3_quotient_core(3, 1, 1, 1)?,
        rank3_quotient_core(3, 2, 1, 1)?,
        rank3_quotient_core(3, 1, 0, 1)?,
        rank3_quotient_core(5, 2, 3, 4)?,
        rank4_quotient_core(3, 1, 0, 1)?,
        rank4_quotient_core(3, 1, 1, 1)?,
        rank4_quotient_core(3, 1, 0, 0)?,
        rank4_quotient_core(3, 1, 2, 1)?,
        scalar_automorphism(3, 2)?,
        scalar_automorphism(5, 2)?,
        scalar_automorphism(2, 1)?,
        wreath_twist()?,
        cyclic_shift()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fixtures_pass() {
        for f in [
            rank3_quotient_core(3, 1, 1, 1).unwrap(),
            rank3_quotient_core(3, 2, 1, 1).unwrap(),
            rank3_quotient_core(3, 1, 0, 1).unwrap(),
            rank4_quotient_core(3, 1, 0, 1).unwrap(),
            rank4_quotient_core(3, 1, 0, 0).unwrap(),
            scalar_automorphism(5, 2).unwrap(),
            cyclic_shift().unwrap(),
        ] {
            for o in f.verify() {
                assert!(o.passed, "{} {}: {:?} vs {}", f.name, o.name, o.expected, o.observed);
            }
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(rank3_quotient_core(3, 0, 1, 1).is_err());
        assert!(rank4_quotient_core(3, 0, 1, 1).is_err());
        assert!(by_name("nope").is_err());
        assert!(by_name("rank3_quotient_core:3,1").is_err());
        assert_eq!(by_name("scalar_automorphism:5,4").unwrap().name, "scalar_automorphism:5,4");
    }
}
