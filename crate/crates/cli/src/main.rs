use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hnnp::corpus;
use hnnp::filtrations::{decide_chief, obstruction_toplevel, Verdict};
use hnnp::problem::{self, Certificate, FullDoc, ProblemSpec, WitnessDoc};
use hnnp::random;
use hnnp::Error;

const EXIT_OK: u8 = 0;
const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

#[derive(Parser)]
#[command(name = "hnnp", version, about = "Residual p-finiteness of HNN extensions of finite p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Problem JSON file (stdin when neither this nor --fixture is given).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Named fixture, optionally with parameters (`name:1,2,3`).
    #[arg(long, conflicts_with = "file")]
    fixture: Option<String>,
    /// Expected prime; rejected if the group uses another.
    #[arg(long)]
    p: Option<u64>,
    /// Enumeration cap for the ambient group.
    #[arg(long)]
    cap: Option<u64>,
    /// Cover degree for abelian pairs.
    #[arg(long)]
    s: Option<u64>,
    /// Emit JSON instead of a text report.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Core of the pair and the order of φ on it.
    Core(Input),
    /// Decide residual p-finiteness and emit a certificate.
    Decide(Input),
    /// Twist-scan and full-filtration obstructions.
    Obstruct(Input),
    /// Explicit embedding witness for abelian pairs.
    Witness(Input),
    /// Britton-reduce the problem's word.
    Reduce(Input),
    /// Re-check every fixture fact.
    VerifyFixtures {
        #[arg(long)]
        json: bool,
    },
    /// Re-check a certificate produced by `decide`.
    VerifyCert {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Survey random small pairs and cross-check the decision routes.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 81)]
        max_order: u64,
        #[arg(long)]
        json: bool,
    },
}

fn read_source(file: Option<&PathBuf>) -> anyhow::Result<String> {
    match file {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn load(input: &Input) -> anyhow::Result<ProblemSpec> {
    let mut spec = match &input.fixture {
        Some(name) => ProblemSpec::fixture(name)?,
        None => ProblemSpec::from_json(&read_source(input.file.as_ref())?)?,
    };
    if input.cap.is_some() {
        spec.options.cap = input.cap;
    }
    if input.s.is_some() {
        spec.options.s = input.s;
    }
    if let Some(p) = input.p {
        let g = spec.group.build()?;
        if g.p() != p {
            return Err(Error::InvalidParameters(format!("--p {p} but the group is a {}-group", g.p())).into());
        }
    }
    Ok(spec)
}

fn emit<T: Serialize>(json: bool, doc: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(doc)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

fn fmt_tuple(t: &[u64]) -> String {
    let parts: Vec<String> = t.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    }
}

fn certificate_text(c: &Certificate) -> String {
    let mut out = vec![
        format!("verdict: {}", c.verdict.as_str()),
        format!("route: {:?}", c.route).to_lowercase(),
        format!(
            "core: order {}, automorphism order {}",
            c.core.order, c.core.automorphism_order
        ),
    ];
    if let Some(f) = &c.chief {
        out.push(format!("chief filtration with {} terms", f.len()));
    }
    if let Some(v) = &c.violation {
        out.push(format!(
            "twist violation at a = {}, b = {}: order {} on a core of order {}",
            fmt_tuple(&v.a),
            fmt_tuple(&v.b),
            v.order,
            v.core_order
        ));
    }
    if let Some(cv) = &c.cover {
        out.push(format!(
            "cover of degree {}: factors {:?}, reduces to core: {}",
            cv.s, cv.factors, cv.reduces_to_core
        ));
    }
    out.extend(c.notes.iter().map(|n| format!("note: {n}")));
    out.join("\n")
}

#[derive(Serialize)]
struct SurveyDoc {
    schema: u32,
    p: u64,
    seed: u64,
    pairs: usize,
    residually_p: usize,
    not_residually_p: usize,
    inconclusive: usize,
    abelian_checked: usize,
    disagreements: Vec<String>,
}

fn survey(p: u64, count: usize, seed: u64, max_order: u64) -> anyhow::Result<SurveyDoc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut doc = SurveyDoc {
        schema: problem::SCHEMA,
        p,
        seed,
        pairs: 0,
        residually_p: 0,
        not_residually_p: 0,
        inconclusive: 0,
        abelian_checked: 0,
        disagreements: Vec::new(),
    };
    for i in 0..count {
        let g = random::random_small_group(&mut rng, p, max_order)?;
        let pair = random::random_pair(&mut rng, &g, 2)?;
        let chief = decide_chief(&pair, hnnp::group::DEFAULT_CAP)?;
        doc.pairs += 1;
        match chief.verdict {
            Verdict::ResiduallyP => doc.residually_p += 1,
            Verdict::NotResiduallyP => doc.not_residually_p += 1,
            Verdict::Inconclusive => doc.inconclusive += 1,
        }
        if g.abelian_exponents().is_some() {
            doc.abelian_checked += 1;
            let ab = hnnp::abelian::decide_abelian(&pair)?;
            if ab.verdict != chief.verdict {
                doc.disagreements.push(format!("pair {i}: abelian criterion and chief search differ"));
            }
        }
        if obstruction_toplevel(&pair)?.is_some() && chief.verdict == Verdict::ResiduallyP {
            doc.disagreements.push(format!("pair {i}: twist violation but chief filtration found"));
        }
    }
    Ok(doc)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Core(input) => {
            let spec = load(&input)?;
            let doc = problem::core_doc(&spec.build()?)?;
            emit(input.json, &doc, || {
                let elems: Vec<String> = doc.core.iter().map(|t| fmt_tuple(t)).collect();
                format!(
                    "core ({} elements): {}\nr = {} (orbit r = {})\norder of φ on the core: {}",
                    doc.core_order,
                    elems.join(" "),
                    doc.r,
                    doc.orbit_r,
                    doc.order
                )
            })?;
            Ok(EXIT_OK)
        }
        Command::Decide(input) => {
            let spec = load(&input)?;
            let cert = problem::decide(&spec)?;
            emit(input.json, &cert, || certificate_text(&cert))?;
            Ok(verdict_exit(cert.verdict))
        }
        Command::Obstruct(input) => {
            let spec = load(&input)?;
            let doc = problem::obstruct(&spec)?;
            emit(input.json, &doc, || {
                let mut out = Vec::new();
                match &doc.toplevel {
                    Some(v) => out.push(format!(
                        "top level: violation at a = {}, b = {} (order {})",
                        fmt_tuple(&v.a),
                        fmt_tuple(&v.b),
                        v.order
                    )),
                    None => out.push("top level: no violation".into()),
                }
                match &doc.full {
                    FullDoc::Refuted { prefixes, failures, .. } => out.push(format!(
                        "full search: refuted after {prefixes} prefixes; failures {failures:?}"
                    )),
                    FullDoc::Inconclusive { filtration } => out.push(format!(
                        "full search: a filtration with {} terms passes every check",
                        filtration.len()
                    )),
                    FullDoc::Skipped { reason } => out.push(format!("full search skipped: {reason}")),
                }
                out.join("\n")
            })?;
            Ok(if doc.refutes() { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Command::Witness(input) => {
            let spec = load(&input)?;
            let doc = problem::witness(&spec)?;
            let ok = match &doc {
                WitnessDoc::Elementary {
                    embedding_ok, wrapped_ok, ..
                } => *embedding_ok && *wrapped_ok,
                WitnessDoc::Abelian { .. } => true,
            };
            emit(input.json, &doc, || match &doc {
                WitnessDoc::Elementary {
                    x_dim,
                    gamma_order,
                    y_order,
                    embedding_ok,
                    wrapped_ok,
                    ..
                } => format!(
                    "X = F_p^{x_dim}, γ of order {gamma_order}, |Y| = {y_order}\nembedding into (X, γ): {embedding_ok}\nembedding into (Y, c_y): {wrapped_ok}"
                ),
                WitnessDoc::Abelian {
                    homocyclic,
                    power_orders,
                    chief,
                    ..
                } => format!(
                    "homocyclic exponents {homocyclic:?}\npower filtration orders {power_orders:?}\nchief filtration with {} terms",
                    chief.len()
                ),
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_DISAGREEMENT })
        }
        Command::Reduce(input) => {
            let spec = load(&input)?;
            let doc = problem::reduce(&spec)?;
            emit(input.json, &doc, || match &doc.base {
                Some(b) => format!("reduces to the base element {}", fmt_tuple(b)),
                None => format!("reduced word has {} stable letters: {:?}", doc.t_length, doc.reduced),
            })?;
            Ok(EXIT_OK)
        }
        Command::VerifyFixtures { json } => {
            let mut all = Vec::new();
            for f in corpus::all_fixtures()? {
                let outcomes = f.verify();
                all.push((f.name.clone(), outcomes));
            }
            let ok = all.iter().all(|(_, o)| o.iter().all(|x| x.passed));
            let doc: Vec<serde_json::Value> = all
                .iter()
                .map(|(name, o)| serde_json::json!({ "fixture": name, "facts": o }))
                .collect();
            emit(json, &doc, || {
                let mut out = Vec::new();
                for (name, outcomes) in &all {
                    out.push(name.to_string());
                    for o in outcomes {
                        let mark = if o.passed { "ok  " } else { "FAIL" };
                        let expected = o.expected.as_deref().unwrap_or("(recorded)");
                        out.push(format!("  {mark} {}: {} [expected {expected}, observed {}]", o.name, o.claim, o.observed));
                    }
                }
                out.push(if ok { "all facts hold".into() } else { "some facts failed".into() });
                out.join("\n")
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_DISAGREEMENT })
        }
        Command::VerifyCert { file, json } => {
            let text = read_source(file.as_ref())?;
            let cert: Certificate = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidParameters(format!("certificate JSON: {e}")))?;
            let rep = problem::verify_certificate(&cert)?;
            emit(json, &rep, || {
                let mut out: Vec<String> = rep
                    .checks
                    .iter()
                    .map(|c| format!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail))
                    .collect();
                out.push(if rep.ok { "certificate accepted".into() } else { "certificate rejected".into() });
                out.join("\n")
            })?;
            Ok(if rep.ok { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Enumerate {
            p,
            count,
            seed,
            max_order,
            json,
        } => {
            hnnp::arith::check_prime(p)?;
            let doc = survey(p, count, seed, max_order)?;
            emit(json, &doc, || {
                format!(
                    "{} pairs (p = {p}, seed {seed}): {} residually p, {} not, {} inconclusive\nabelian cross-checks: {}, disagreements: {}",
                    doc.pairs,
                    doc.residually_p,
                    doc.not_residually_p,
                    doc.inconclusive,
                    doc.abelian_checked,
                    doc.disagreements.len()
                )
            })?;
            Ok(if doc.disagreements.is_empty() { EXIT_OK } else { EXIT_DISAGREEMENT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::OracleDisagreement(_)) => EXIT_DISAGREEMENT,
                _ => EXIT_INVALID,
            };
            ExitCode::from(code)
        }
    }
}
