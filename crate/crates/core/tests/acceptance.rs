//! Acceptance criteria 1–9. Prints one line per criterion and exits nonzero
//! if any fails or overruns its time limit.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hnnp::abelian::{
    abelian_chief_pipeline, build_witness_elementary, check_abprime, cyclic_cover, decide_abelian,
    default_cover_degree,
};
use hnnp::arith::is_p_power;
use hnnp::corpus::{self, Fixture};
use hnnp::filtrations::{
    decide_chief, is_compatible, obstruction_full, obstruction_toplevel, sufficient_layerwise, sufficient_quotient,
    verify_chief_certificate, FullObstruction, Verdict,
};
use hnnp::group::{lower_central_series, Elem, Filtration, DEFAULT_CAP};
use hnnp::hnn::{core_fixpoint, core_orbit, pair_embedding_check, twisted_pair, HnnPair};
use hnnp::random;
use hnnp::words::core_britton_oracle;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn facts_hold(f: &Fixture) -> Result<usize, String> {
    let outcomes = f.verify();
    for o in &outcomes {
        ensure!(o.passed, "{}: {} expected {:?}, observed {}", f.name, o.name, o.expected, o.observed);
    }
    Ok(outcomes.len())
}

fn criterion_1() -> Outcome {
    let f = corpus::wreath_twist().map_err(|e| e.to_string())?;
    let pair = &f.pair;
    let g = pair.group();
    ensure!(core_fixpoint(pair).unwrap().order() == 1, "core is not trivial");
    let x = corpus::wreath_element(g, (1, 0), &[]);
    let psi = twisted_pair(pair, x, g.identity()).unwrap();
    let core = core_fixpoint(&psi).unwrap();
    ensure!(core.order() == 3, "twisted core has {} elements", core.order());
    ensure!(core.automorphism_order() == 2, "twisted order {}", core.automorphism_order());
    let v = obstruction_toplevel(pair).unwrap().ok_or("no violation")?;
    ensure!(v.a == x && v.b == g.identity(), "violation at {} {}", g.format(v.a), g.format(v.b));
    let n = facts_hold(&f)?;
    Ok(format!("violation at a = {}, b = 1; {n} facts", g.format(x)))
}

fn criterion_2() -> Outcome {
    let f = corpus::cyclic_shift().map_err(|e| e.to_string())?;
    let pair = &f.pair;
    let g = pair.group();
    ensure!(g.order() == 27, "|G| = {}", g.order());
    let lcs = lower_central_series(g, DEFAULT_CAP).unwrap();
    ensure!(lcs.len() == 3, "lower central series has {} terms", lcs.len());
    let mut expected = BTreeSet::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if (a + b + c) % 3 == 0 {
                    expected.insert(corpus::cyclic_shift_element(g, 0, [a, b, c]));
                }
            }
        }
    }
    let gamma2: BTreeSet<Elem> = lcs[1].elements().iter().copied().collect();
    ensure!(gamma2 == expected && gamma2.len() == 3, "commutator subgroup {:?}", gamma2);
    ensure!(lcs[2].is_trivial(), "third term is not trivial");
    ensure!(core_fixpoint(pair).unwrap().order() == 1, "core is not trivial");
    let refutation = match obstruction_full(pair, DEFAULT_CAP).unwrap() {
        FullObstruction::Refuted(r) => r,
        FullObstruction::Inconclusive(_) => return Err("full search found a passing filtration".into()),
    };
    ensure!(
        decide_chief(pair, DEFAULT_CAP).unwrap().verdict == Verdict::NotResiduallyP,
        "chief search does not say no"
    );
    let n = facts_hold(&f)?;
    Ok(format!("refuted after {} prefixes; {n} facts", refutation.prefixes))
}

fn criterion_3() -> Outcome {
    let mut fixtures = 0;
    let mut facts = 0;
    for p in [2u64, 3, 5] {
        for x in 1..p {
            for y in 0..p {
                for z in 1..p {
                    facts += facts_hold(&corpus::rank3_quotient_core(p, x, y, z).unwrap())?;
                    fixtures += 1;
                }
            }
        }
        for a in 1..p {
            for b in 0..p {
                for c in 0..p {
                    facts += facts_hold(&corpus::rank4_quotient_core(p, a, b, c).unwrap())?;
                    fixtures += 1;
                }
            }
        }
    }
    Ok(format!("{fixtures} fixtures, {facts} facts"))
}

fn triangle(pair: &HnnPair) -> Result<(), String> {
    let fix = core_fixpoint(pair).map_err(|e| e.to_string())?;
    let orbit = core_orbit(pair).map_err(|e| e.to_string())?;
    ensure!(fix.subgroup == orbit.subgroup, "fixpoint and orbit cores differ");
    let britton = core_britton_oracle(pair, fix.r + 2);
    ensure!(britton == fix.subgroup, "Britton core has order {}", britton.order());
    Ok(())
}

fn small_pairs(seed: u64, n: usize) -> Vec<HnnPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let p = [2, 3][i % 2];
            let g = random::random_small_group(&mut rng, p, 81).unwrap();
            random::random_pair(&mut rng, &g, 2).unwrap()
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let fixtures = corpus::all_fixtures().unwrap();
    for f in &fixtures {
        triangle(&f.pair).map_err(|e| format!("{}: {e}", f.name))?;
    }
    let pairs = small_pairs(4, 240);
    for (i, pair) in pairs.iter().enumerate() {
        triangle(pair).map_err(|e| format!("random pair {i}: {e}"))?;
    }
    Ok(format!("{} fixtures and {} random pairs agree", fixtures.len(), pairs.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut yes = 0;
    let n = 240;
    for i in 0..n {
        let (p, max_log) = [(2, 6), (3, 4)][i % 2];
        let pair = random::random_abelian_pair(&mut rng, p, max_log).unwrap();
        let ab = decide_abelian(&pair).unwrap().verdict;
        let chief = decide_chief(&pair, DEFAULT_CAP).unwrap().verdict;
        ensure!(ab == chief, "pair {i}: abelian {ab:?}, chief {chief:?}");
        yes += (ab == Verdict::ResiduallyP) as usize;
    }
    Ok(format!("{n} pairs agree ({yes} residually p)"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 120;
    for i in 0..n {
        let (p, d) = match i % 3 {
            0 => (2, rng.gen_range(1..=5)),
            1 => (3, rng.gen_range(1..=4)),
            _ => (5, rng.gen_range(1..=3)),
        };
        let pair = random::random_elementary_hyp_pair(&mut rng, p, d).unwrap();
        let w = build_witness_elementary(&pair).map_err(|e| format!("pair {i}: {e}"))?;
        ensure!(is_p_power(w.gamma_order(), p), "pair {i}: γ has order {}", w.gamma_order());
        // γ extends φ: γ(ι(a)) = ι(φ(a))
        for &a in pair.a().elements() {
            let lhs = w.gamma.apply(w.embedding.apply(a).unwrap());
            let rhs = w.embedding.apply(pair.apply(a).unwrap());
            ensure!(lhs == rhs, "pair {i}: γ disagrees with φ at {a}");
        }
        let q = pair.b().order() / pair.a_cap_b().order();
        let s = pair.group().order() / (pair.a().order() * q);
        let expected = pair.a().order() * q.pow(p as u32 - 1) * s;
        ensure!(w.x.order() == expected, "pair {i}: |X| = {}, expected {expected}", w.x.order());
        let target = w.target_pair().unwrap();
        ensure!(pair_embedding_check(&w.embedding, &pair, &target).unwrap().ok, "pair {i}: (X, γ) check");
        let wrapped = w.wrapped().unwrap();
        ensure!(
            pair_embedding_check(&wrapped.embedding, &pair, &wrapped.pair).unwrap().ok,
            "pair {i}: (Y, c_y) check"
        );
    }
    Ok(format!("{n} witnesses"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 120;
    for i in 0..n {
        let (p, max_log) = [(2, 5), (3, 3)][i % 2];
        let pair = random::random_abelian_pair(&mut rng, p, max_log).unwrap();
        let s = default_cover_degree(&pair).unwrap();
        let data = cyclic_cover(&pair, s).map_err(|e| format!("pair {i}: {e}"))?;
        ensure!(data.beta_injective, "pair {i}: β not injective");
        let g = pair.group().order() as u128;
        let a = pair.a().order() as u128;
        let expected = g.pow(s as u32) / a.pow(s as u32 - 1);
        ensure!(
            data.g_prime.order() as u128 == expected && data.order_formula_holds,
            "pair {i}: |G'| = {}, expected {expected}",
            data.g_prime.order()
        );
        ensure!(data.block_injective.iter().all(|&b| b), "pair {i}: a block map is not injective");
        let report = check_abprime(&data).unwrap();
        ensure!(report.ok(), "pair {i}: {:?}", report.failures);
    }
    Ok(format!("{n} covers"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 60;
    for i in 0..n {
        let (p, max_log) = [(2, 5), (3, 4)][i % 2];
        let pair = random::random_abelian_hyp_pair(&mut rng, p, max_log).unwrap();
        let res = abelian_chief_pipeline(&pair, DEFAULT_CAP).map_err(|e| format!("pair {i}: {e}"))?;
        verify_chief_certificate(&pair, &res.chief).map_err(|e| format!("pair {i}: {e}"))?;
    }
    Ok(format!("{n} pipeline certificates"))
}

fn criterion_9() -> Outcome {
    let mut pairs: Vec<HnnPair> = small_pairs(9, 200);
    pairs.extend(corpus::all_fixtures().unwrap().into_iter().map(|f| f.pair));
    let (mut layer_hits, mut violations, mut refuted) = (0, 0, 0);
    for (i, pair) in pairs.iter().enumerate() {
        let small = pair.group().order() <= 6561;
        let violation = obstruction_toplevel(pair).unwrap().is_some();
        if !small {
            ensure!(violation, "pair {i}: large fixture without a violation");
            violations += 1;
            continue;
        }
        let chief = decide_chief(pair, DEFAULT_CAP).unwrap().verdict;
        if violation {
            violations += 1;
            ensure!(chief == Verdict::NotResiduallyP, "pair {i}: violation but {chief:?}");
        }
        let lcs = Filtration::new(lower_central_series(pair.group(), DEFAULT_CAP).unwrap()).unwrap();
        if is_compatible(pair, &lcs) {
            let layer = sufficient_layerwise(pair, &lcs, DEFAULT_CAP).unwrap().holds;
            let quot = sufficient_quotient(pair, &lcs, DEFAULT_CAP).unwrap().holds;
            if layer || quot {
                layer_hits += 1;
                ensure!(chief == Verdict::ResiduallyP, "pair {i}: sufficient but {chief:?}");
            }
        }
        if pair.group().order() <= 81 {
            if let FullObstruction::Refuted(_) = obstruction_full(pair, DEFAULT_CAP).unwrap() {
                refuted += 1;
                ensure!(chief == Verdict::NotResiduallyP, "pair {i}: refuted but {chief:?}");
            }
        }
    }
    Ok(format!(
        "{} pairs: {layer_hits} sufficient, {violations} top-level violations, {refuted} full refutations",
        pairs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("twisted core obstruction", 60, criterion_1),
        ("cyclic shift refutation", 60, criterion_2),
        ("quotient core fixtures", 60, criterion_3),
        ("core oracle triangle", 120, criterion_4),
        ("abelian equivalence", 600, criterion_5),
        ("elementary witness", 300, criterion_6),
        ("cyclic cover", 600, criterion_7),
        ("abelian chief pipeline", 600, criterion_8),
        ("consistency sandwich", 600, criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let (status, detail) = match result {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time limit; {d}")),
            Err(d) => ("FAIL", d),
        };
        failed += (status == "FAIL") as usize;
        println!(
            "criterion {} [{name}]: {status} ({:.1}s / {}s) {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
