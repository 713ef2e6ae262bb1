//! JSON problem descriptions, decisions with re-checkable certificates, and
//! the other documents exchanged with the command line front end.
//!
//! Elements are written as integer tuples in the canonical coordinates of
//! their group.

use serde::{Deserialize, Serialize};

use crate::abelian::{
    abelian_chief_pipeline, build_witness_elementary, check_abprime, cyclic_cover, decide_abelian, default_cover_degree,
};
use crate::corpus;
use crate::error::{Error, Result};
use crate::filtrations::{
    decide_chief, obstruction_full, obstruction_toplevel, twist_violation, verify_chief_certificate,
    FullObstruction, SearchStats, Verdict, Violation,
};
use crate::group::{Elem, Filtration, Group, Subgroup, DEFAULT_CAP};
use crate::hnn::{core_fixpoint, core_orbit, pair_embedding_check, twisted_pair, HnnPair};
use crate::random::satisfies_intersection_hypothesis;
use crate::words::{britton_reduce, Letter, Word, MAX_WORD_LEN};

pub const SCHEMA: u32 = 1;

/// Largest group order on which the exhaustive chief search is attempted.
pub const CHIEF_ORDER_LIMIT: u64 = 6561;

fn schema() -> u32 {
    SCHEMA
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial {
        p: u64,
    },
    Abelian {
        p: u64,
        exponents: Vec<u32>,
    },
    MatrixSemidirect {
        p: u64,
        m: u64,
        action: Vec<Vec<u64>>,
        #[serde(default)]
        relations: Vec<Vec<u64>>,
    },
    GroupRing {
        p: u64,
        rank: u32,
    },
    /// The ambient group of a named fixture.
    Fixture {
        name: String,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        match self {
            GroupSpec::Trivial { p } => Group::trivial(*p),
            GroupSpec::Abelian { p, exponents } => Group::abelian(*p, exponents),
            GroupSpec::MatrixSemidirect {
                p,
                m,
                action,
                relations,
            } => Group::matrix_semidirect(*p, *m, action, relations),
            GroupSpec::GroupRing { p, rank } => Group::group_ring_semidirect(*p, *rank),
            GroupSpec::Fixture { name } => Ok(corpus::by_name(name)?.pair.group().clone()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Enumeration cap for the ambient group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    /// Cover degree for the abelian cover.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    /// Largest order on which the chief search runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chief_limit: Option<u64>,
}

impl Options {
    fn is_default(&self) -> bool {
        *self == Options::default()
    }
}

/// `"t"`, `"t^-1"` (or `"T"`), or an element tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LetterSpec {
    Stable(String),
    Elem(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default = "schema")]
    pub schema: u32,
    pub group: GroupSpec,
    /// Generators of `A`.
    #[serde(default)]
    pub a: Vec<Vec<u64>>,
    /// Their images under `φ`.
    #[serde(default)]
    pub images: Vec<Vec<u64>>,
    /// Optional generators of `B`, checked against the image of `φ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<LetterSpec>>,
    #[serde(default, skip_serializing_if = "Options::is_default")]
    pub options: Options,
}

fn located<T>(r: Result<T>, at: impl Fn() -> String) -> Result<T> {
    r.map_err(|e| Error::InvalidParameters(format!("{}: {e}", at())))
}

fn elems(g: &Group, tuples: &[Vec<u64>], field: &str) -> Result<Vec<Elem>> {
    tuples
        .iter()
        .enumerate()
        .map(|(i, t)| located(g.encode(t), || format!("{field}[{i}]")))
        .collect()
}

pub fn tuple(g: &Group, e: Elem) -> Vec<u64> {
    g.decode(e)
}

fn tuples(g: &Group, es: &[Elem]) -> Vec<Vec<u64>> {
    es.iter().map(|&e| tuple(g, e)).collect()
}

impl ProblemSpec {
    pub fn from_json(s: &str) -> Result<ProblemSpec> {
        let spec: ProblemSpec =
            serde_json::from_str(s).map_err(|e| Error::InvalidParameters(format!("problem JSON: {e}")))?;
        if spec.schema != SCHEMA {
            return Err(Error::InvalidParameters(format!("unsupported schema {}", spec.schema)));
        }
        Ok(spec)
    }

    /// Describes an existing pair on a group given by `group`.
    pub fn from_pair(group: GroupSpec, pair: &HnnPair) -> ProblemSpec {
        let g = pair.group();
        let gens = pair.a().generators().to_vec();
        let images: Vec<Elem> = gens.iter().map(|&x| pair.apply(x).expect("in A")).collect();
        ProblemSpec {
            schema: SCHEMA,
            group,
            a: tuples(g, &gens),
            images: tuples(g, &images),
            b: None,
            word: None,
            options: Options::default(),
        }
    }

    /// The problem for a named fixture (`name` or `name:params`).
    pub fn fixture(name: &str) -> Result<ProblemSpec> {
        let f = corpus::by_name(name)?;
        Ok(ProblemSpec::from_pair(
            GroupSpec::Fixture {
                name: name.to_string(),
            },
            &f.pair,
        ))
    }

    pub fn cap(&self) -> u64 {
        self.options.cap.unwrap_or(DEFAULT_CAP)
    }

    pub fn chief_limit(&self) -> u64 {
        self.options.chief_limit.unwrap_or(CHIEF_ORDER_LIMIT)
    }

    pub fn build(&self) -> Result<HnnPair> {
        let g = located(self.group.build(), || "group".into())?;
        if self.a.len() != self.images.len() {
            return Err(Error::InvalidParameters(format!(
                "a has {} generators but images has {}",
                self.a.len(),
                self.images.len()
            )));
        }
        let a = elems(&g, &self.a, "a")?;
        let images = elems(&g, &self.images, "images")?;
        let b = self.b.as_ref().map(|b| elems(&g, b, "b")).transpose()?;
        located(HnnPair::from_generators(&g, &a, &images, b.as_deref()), || "phi".into())
    }

    pub fn parse_word(&self, g: &Group) -> Result<Option<Word>> {
        let Some(letters) = &self.word else { return Ok(None) };
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::InvalidParameters(format!("word longer than {MAX_WORD_LEN} letters")));
        }
        let mut out = Vec::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            out.push(match l {
                LetterSpec::Stable(s) => match s.as_str() {
                    "t" => Letter::T(true),
                    "t^-1" | "T" => Letter::T(false),
                    _ => return Err(Error::InvalidParameters(format!("word[{i}]: unknown letter {s:?}"))),
                },
                LetterSpec::Elem(t) => Letter::G(located(g.encode(t), || format!("word[{i}]"))?),
            });
        }
        Ok(Some(Word::new(g, &out)))
    }
}

pub fn word_spec(g: &Group, w: &Word) -> Vec<LetterSpec> {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::G(x) => LetterSpec::Elem(tuple(g, *x)),
            Letter::T(true) => LetterSpec::Stable("t".into()),
            Letter::T(false) => LetterSpec::Stable("t^-1".into()),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreDoc {
    pub schema: u32,
    pub core: Vec<Vec<u64>>,
    /// Stabilization index of the fixpoint iteration.
    pub r: usize,
    /// Stabilization index of the orbit description.
    pub orbit_r: usize,
    pub core_order: u64,
    /// Order of `φ` restricted to the core.
    pub order: u64,
}

pub fn core_doc(pair: &HnnPair) -> Result<CoreDoc> {
    let g = pair.group();
    let fix = core_fixpoint(pair)?;
    let orbit = core_orbit(pair)?;
    Ok(CoreDoc {
        schema: SCHEMA,
        core: tuples(g, fix.subgroup.elements()),
        r: fix.r,
        orbit_r: orbit.r,
        core_order: fix.order(),
        order: fix.automorphism_order(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Abelian,
    Chief,
    Obstruction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationDoc {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub order: u64,
    pub core_order: u64,
}

fn violation_doc(g: &Group, v: &Violation) -> ViolationDoc {
    ViolationDoc {
        a: tuple(g, v.a),
        b: tuple(g, v.b),
        order: v.order,
        core_order: v.core_order,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreSummary {
    pub generators: Vec<Vec<u64>>,
    pub order: u64,
    pub automorphism_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub problem: ProblemSpec,
    pub route: Route,
    pub verdict: Verdict,
    pub core: CoreSummary,
    /// Chief filtration, top to bottom, each term by generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chief: Option<Vec<Vec<Vec<u64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverDoc>,
    /// How the route was chosen.
    #[serde(default)]
    pub notes: Vec<String>,
}

/// Summary of the degree-`s` cyclic cover of an abelian pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub s: u64,
    /// Cyclic factor exponents of `G'`.
    pub factors: Vec<u32>,
    pub order_formula_holds: bool,
    pub beta_injective: bool,
    pub blocks_injective: bool,
    pub reduces_to_core: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

pub fn cover_doc(pair: &HnnPair, s: Option<u64>) -> Result<CoverDoc> {
    let s = match s {
        Some(s) => s,
        None => default_cover_degree(pair)?,
    };
    let data = cyclic_cover(pair, s)?;
    let rep = check_abprime(&data)?;
    Ok(CoverDoc {
        s,
        factors: data.g_prime.abelian_exponents().map(<[u32]>::to_vec).unwrap_or_default(),
        order_formula_holds: data.order_formula_holds,
        beta_injective: data.beta_injective,
        blocks_injective: data.block_injective.iter().all(|&b| b),
        reduces_to_core: rep.ok(),
        failures: rep.failures,
    })
}

fn filtration_doc(f: &Filtration) -> Vec<Vec<Vec<u64>>> {
    let g = f.group();
    f.terms().iter().map(|t| tuples(g, t.generators())).collect()
}

fn filtration_from_doc(g: &Group, doc: &[Vec<Vec<u64>>]) -> Result<Filtration> {
    let mut terms = Vec::with_capacity(doc.len());
    for (i, gens) in doc.iter().enumerate() {
        terms.push(Subgroup::generated(g, &elems(g, gens, &format!("chief[{i}]"))?)?);
    }
    Filtration::new(terms)
}

/// Abelian groups go to the core-order criterion; other groups up to the
/// chief limit get the exhaustive chief search; larger ones only the
/// top-level twist scan.
pub fn decide(problem: &ProblemSpec) -> Result<Certificate> {
    let pair = problem.build()?;
    let g = pair.group();
    let core = core_fixpoint(&pair)?;
    let summary = CoreSummary {
        generators: tuples(g, core.subgroup.generators()),
        order: core.order(),
        automorphism_order: core.automorphism_order(),
    };
    let mut notes = Vec::new();
    let mut cert = Certificate {
        schema: SCHEMA,
        problem: problem.clone(),
        route: Route::Obstruction,
        verdict: Verdict::Inconclusive,
        core: summary,
        chief: None,
        violation: None,
        search: None,
        cover: None,
        notes: Vec::new(),
    };
    if g.abelian_exponents().is_some() {
        cert.route = Route::Abelian;
        cert.verdict = decide_abelian(&pair)?.verdict;
        match cover_doc(&pair, problem.options.s) {
            Ok(c) => cert.cover = Some(c),
            Err(e @ Error::OracleDisagreement(_)) => return Err(e),
            Err(e) => notes.push(format!("cyclic cover skipped: {e}")),
        }
        if cert.verdict == Verdict::ResiduallyP {
            if satisfies_intersection_hypothesis(&pair) {
                cert.chief = Some(filtration_doc(&abelian_chief_pipeline(&pair, problem.cap())?.chief));
                notes.push("chief filtration from the power-filtration pipeline".into());
            } else if g.order() <= problem.chief_limit() {
                let d = decide_chief(&pair, problem.cap())?;
                if d.verdict != cert.verdict {
                    return Err(Error::OracleDisagreement("abelian criterion and chief search disagree".into()));
                }
                cert.chief = d.certificate.as_ref().map(filtration_doc);
                cert.search = Some(d.stats);
                notes.push("chief filtration from the exhaustive search".into());
            }
        }
    } else if g.order() <= problem.chief_limit() {
        cert.route = Route::Chief;
        let d = decide_chief(&pair, problem.cap())?;
        cert.verdict = d.verdict;
        cert.chief = d.certificate.as_ref().map(filtration_doc);
        cert.search = Some(d.stats);
    } else {
        notes.push(format!(
            "order {} exceeds the chief search limit {}; only the twist scan was run",
            g.order(),
            problem.chief_limit()
        ));
    }
    if cert.verdict != Verdict::ResiduallyP {
        if let Some(v) = obstruction_toplevel(&pair)? {
            if cert.route == Route::Obstruction {
                cert.verdict = Verdict::NotResiduallyP;
            }
            cert.violation = Some(violation_doc(g, &v));
        }
    }
    cert.notes = notes;
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Re-derives every claim in a certificate from the problem alone.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    if cert.schema != SCHEMA {
        return Err(Error::InvalidParameters(format!("unsupported schema {}", cert.schema)));
    }
    let pair = cert.problem.build()?;
    let g = pair.group();
    let p = g.p();
    let mut rep = VerifyReport::default();

    let core = core_fixpoint(&pair)?;
    let claimed = Subgroup::generated(g, &elems(g, &cert.core.generators, "core.generators")?)?;
    rep.push(
        "core",
        claimed == core.subgroup && cert.core.order == core.order(),
        format!("claimed order {}, recomputed {}", cert.core.order, core.order()),
    );
    let ord = core.automorphism_order();
    rep.push(
        "core_automorphism_order",
        cert.core.automorphism_order == ord,
        format!("claimed {}, recomputed {ord}", cert.core.automorphism_order),
    );

    if let Some(doc) = &cert.chief {
        let res = filtration_from_doc(g, doc).and_then(|f| verify_chief_certificate(&pair, &f));
        rep.push("chief", res.is_ok(), res.err().map_or("verified".into(), |e| e.to_string()));
    }
    if let Some(c) = &cert.cover {
        let again = cover_doc(&pair, Some(c.s))?;
        let sound = again.order_formula_holds && again.beta_injective && again.blocks_injective && again.reduces_to_core;
        rep.push("cover", again == *c && sound, format!("degree {} cover recomputed", c.s));
    }
    if let Some(v) = &cert.violation {
        let a = g.encode(&v.a)?;
        let b = g.encode(&v.b)?;
        let t = twisted_pair(&pair, a, b)?;
        let tc = core_fixpoint(&t)?;
        let o = tc.automorphism_order();
        rep.push(
            "violation",
            o == v.order && tc.order() == v.core_order && !crate::arith::is_p_power(o, p),
            format!("twisted core order {}, automorphism order {o}", tc.order()),
        );
    }

    match (cert.route, cert.verdict) {
        (Route::Abelian, v) => {
            let expect = if crate::arith::is_p_power(ord, p) {
                Verdict::ResiduallyP
            } else {
                Verdict::NotResiduallyP
            };
            rep.push("abelian_criterion", g.is_abelian() && v == expect, format!("core order criterion gives {}", expect.as_str()));
        }
        (Route::Chief, Verdict::ResiduallyP) => {
            rep.push("chief_present", cert.chief.is_some(), "positive answers carry a chief filtration");
        }
        (Route::Chief, Verdict::NotResiduallyP) => {
            if cert.violation.is_none() {
                let d = decide_chief(&pair, cert.problem.cap())?;
                rep.push("exhaustive_search", d.verdict == Verdict::NotResiduallyP, "search re-run");
            }
        }
        (Route::Obstruction, Verdict::NotResiduallyP) => {
            rep.push("violation_present", cert.violation.is_some(), "refutation needs a twist violation");
        }
        (Route::Obstruction, Verdict::Inconclusive) => {
            let v = twist_violation(&pair)?;
            rep.push("no_violation", v.is_none(), "twist scan re-run");
        }
        (route, verdict) => {
            rep.push("route", false, format!("{route:?} cannot produce {}", verdict.as_str()));
        }
    }
    rep.ok = rep.checks.iter().all(|c| c.passed);
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureDoc {
    pub chain: Vec<u64>,
    pub i: usize,
    pub j: usize,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub order: u64,
    pub core_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FullDoc {
    Refuted {
        prefixes: u64,
        incompatible: u64,
        failures: std::collections::BTreeMap<String, u64>,
        records: Vec<FailureDoc>,
    },
    Inconclusive {
        filtration: Vec<Vec<Vec<u64>>>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionDoc {
    pub schema: u32,
    pub toplevel: Option<ViolationDoc>,
    pub full: FullDoc,
}

impl ObstructionDoc {
    pub fn refutes(&self) -> bool {
        self.toplevel.is_some() || matches!(self.full, FullDoc::Refuted { .. })
    }
}

pub fn obstruct(problem: &ProblemSpec) -> Result<ObstructionDoc> {
    let pair = problem.build()?;
    let g = pair.group();
    let toplevel = obstruction_toplevel(&pair)?.map(|v| violation_doc(g, &v));
    let full = if g.order() > problem.chief_limit() {
        FullDoc::Skipped {
            reason: format!("order {} exceeds the search limit {}", g.order(), problem.chief_limit()),
        }
    } else {
        match obstruction_full(&pair, problem.cap())? {
            FullObstruction::Refuted(r) => FullDoc::Refuted {
                prefixes: r.prefixes,
                incompatible: r.incompatible,
                failures: r.failures,
                records: r
                    .records
                    .iter()
                    .map(|f| FailureDoc {
                        chain: f.chain.clone(),
                        i: f.i,
                        j: f.j,
                        a: tuple(g, f.a),
                        b: tuple(g, f.b),
                        order: f.order,
                        core_order: f.core_order,
                    })
                    .collect(),
            },
            FullObstruction::Inconclusive(f) => FullDoc::Inconclusive {
                filtration: filtration_doc(&f),
            },
        }
    };
    Ok(ObstructionDoc {
        schema: SCHEMA,
        toplevel,
        full,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapPair {
    pub from: Vec<u64>,
    pub to: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum WitnessDoc {
    /// `X = F_p^dim`, `γ` on the standard basis, `G → X` on generators of
    /// `G`, and `Y = Z/ord(γ) ⋉ X` with `y` acting as `γ`.
    Elementary {
        schema: u32,
        x_dim: usize,
        dims: [usize; 4],
        gamma: Vec<MapPair>,
        embedding: Vec<MapPair>,
        gamma_order: u64,
        y_order: u64,
        y: Vec<u64>,
        embedding_ok: bool,
        wrapped_ok: bool,
    },
    /// Chief filtration of `G` from the power-filtration pipeline.
    Abelian {
        schema: u32,
        homocyclic: Vec<u32>,
        power_orders: Vec<u64>,
        x_order: u64,
        gamma_order: u64,
        chief: Vec<Vec<Vec<u64>>>,
    },
}

pub fn witness(problem: &ProblemSpec) -> Result<WitnessDoc> {
    let pair = problem.build()?;
    let g = pair.group();
    let exps = g
        .abelian_exponents()
        .ok_or_else(|| Error::Hypothesis("witnesses need an abelian base group".into()))?
        .to_vec();
    if !satisfies_intersection_hypothesis(&pair) {
        return Err(Error::Hypothesis("φ must map A∩B onto itself with p-power order".into()));
    }
    if exps.iter().all(|&e| e == 1) {
        let wit = build_witness_elementary(&pair)?;
        let x = &wit.x;
        let gamma = x
            .generators()
            .iter()
            .map(|&e| MapPair {
                from: tuple(x, e),
                to: tuple(x, wit.gamma.apply(e).expect("total")),
            })
            .collect();
        let embedding = g
            .generators()
            .iter()
            .map(|&e| MapPair {
                from: tuple(g, e),
                to: tuple(x, wit.embedding.apply(e).expect("total")),
            })
            .collect();
        let target = wit.target_pair()?;
        let embedding_ok = pair_embedding_check(&wit.embedding, &pair, &target)?.ok;
        let w = wit.wrapped()?;
        let wrapped_ok = pair_embedding_check(&w.embedding, &pair, &w.pair)?.ok;
        Ok(WitnessDoc::Elementary {
            schema: SCHEMA,
            x_dim: x.radices().len(),
            dims: [wit.dim_core, wit.dim_p, wit.dim_q, wit.dim_s],
            gamma,
            embedding,
            gamma_order: wit.gamma_order(),
            y_order: w.y_group.order(),
            y: tuple(&w.y_group, w.y),
            embedding_ok,
            wrapped_ok,
        })
    } else {
        let res = abelian_chief_pipeline(&pair, problem.cap())?;
        Ok(WitnessDoc::Abelian {
            schema: SCHEMA,
            homocyclic: res.embedding.h.abelian_exponents().expect("abelian").to_vec(),
            power_orders: res.power.filtration.terms().iter().map(Subgroup::order).collect(),
            x_order: res.witness.x.order(),
            gamma_order: res.witness.gamma_order(),
            chief: filtration_doc(&res.chief),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceDoc {
    pub schema: u32,
    pub input: Vec<LetterSpec>,
    pub reduced: Vec<LetterSpec>,
    pub t_length: usize,
    /// Set when the reduced word lies in `G`.
    pub base: Option<Vec<u64>>,
}

pub fn reduce(problem: &ProblemSpec) -> Result<ReduceDoc> {
    let pair = problem.build()?;
    let g = pair.group();
    let w = problem
        .parse_word(g)?
        .ok_or_else(|| Error::InvalidParameters("problem has no word".into()))?;
    let r = britton_reduce(&pair, &w);
    Ok(ReduceDoc {
        schema: SCHEMA,
        input: word_spec(g, &w),
        reduced: word_spec(g, &r),
        t_length: r.t_length(),
        base: r.as_base().map(|e| tuple(g, e)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3_doubling() -> ProblemSpec {
        ProblemSpec::from_json(
            r#"{"group": {"kind": "abelian", "p": 3, "exponents": [1]}, "a": [[1]], "images": [[2]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parse_and_decide() {
        let spec = z3_doubling();
        let cert = decide(&spec).unwrap();
        assert_eq!(cert.route, Route::Abelian);
        assert_eq!(cert.verdict, Verdict::NotResiduallyP);
        assert!(verify_certificate(&cert).unwrap().ok);
        let mut bad = cert.clone();
        bad.verdict = Verdict::ResiduallyP;
        assert!(!verify_certificate(&bad).unwrap().ok);
    }

    #[test]
    fn located_errors() {
        let e = ProblemSpec::from_json(
            r#"{"group": {"kind": "abelian", "p": 3, "exponents": [1]}, "a": [[1]], "images": [[5]]}"#,
        )
        .unwrap()
        .build()
        .unwrap_err();
        assert!(e.to_string().contains("images[0]"), "{e}");
        assert!(ProblemSpec::from_json(r#"{"group": {"kind": "abelian", "p": 4, "exponents": [1]}}"#)
            .unwrap()
            .build()
            .is_err());
        assert!(ProblemSpec::from_json(r#"{"schema": 2, "group": {"kind": "trivial", "p": 2}}"#).is_err());
    }

    #[test]
    fn reduce_pinch() {
        let mut spec = z3_doubling();
        spec.word = Some(vec![
            LetterSpec::Stable("t^-1".into()),
            LetterSpec::Elem(vec![1]),
            LetterSpec::Stable("t".into()),
        ]);
        let r = reduce(&spec).unwrap();
        assert_eq!(r.base, Some(vec![2]));
    }
}
