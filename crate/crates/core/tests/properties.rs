use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hnnp::abelian::decide_abelian;
use hnnp::filtrations::{
    decide_chief, is_compatible, obstruction_toplevel, sufficient_layerwise, sufficient_quotient, Verdict,
};
use hnnp::group::{lower_central_series, Filtration, DEFAULT_CAP};
use hnnp::hnn::{core_fixpoint, core_orbit, twisted_pair, HnnPair};
use hnnp::problem::{self, Certificate, GroupSpec, ProblemSpec};
use hnnp::random;
use hnnp::words::{britton_reduce, core_britton_oracle, Letter, Word};

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3u64)]
}

fn pair_from(seed: u64, p: u64, max_order: u64) -> HnnPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random::random_small_group(&mut rng, p, max_order).unwrap();
    random::random_pair(&mut rng, &g, 2).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, pair: &HnnPair, len: usize) -> Word {
    let g = pair.group();
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            if rng.gen_bool(0.4) {
                Letter::T(rng.gen_bool(0.5))
            } else if rng.gen_bool(0.5) {
                // bias towards pinchable letters
                let a = pair.a().elements();
                Letter::G(a[rng.gen_range(0..a.len())])
            } else {
                Letter::G(rng.gen_range(0..g.order()))
            }
        })
        .collect();
    Word::new(g, &letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_and_coding(seed in any::<u64>(), p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::random_small_group(&mut rng, p, 243).unwrap();
        for _ in 0..20 {
            let [x, y, z] = [0; 3].map(|_| rng.gen_range(0..g.order()));
            prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
            prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
            prop_assert_eq!(g.encode(&g.decode(x)).unwrap(), x);
            prop_assert_eq!(g.pow(x, g.element_order(x)), g.identity());
        }
    }

    #[test]
    fn core_descriptions_agree(seed in any::<u64>(), p in prime()) {
        let pair = pair_from(seed, p, 81);
        let fix = core_fixpoint(&pair).unwrap();
        let orbit = core_orbit(&pair).unwrap();
        prop_assert_eq!(&fix.subgroup, &orbit.subgroup);
        prop_assert!(fix.subgroup.is_subset(&pair.a_cap_b()));
        prop_assert_eq!(pair.phi().image_of(&fix.subgroup).unwrap(), fix.subgroup.clone());
        prop_assert_eq!(core_britton_oracle(&pair, orbit.r + 2), fix.subgroup);
    }

    #[test]
    fn trivial_twist_is_identity(seed in any::<u64>(), p in prime()) {
        let pair = pair_from(seed, p, 81);
        let t = twisted_pair(&pair, 0, 0).unwrap();
        for &x in pair.a().elements() {
            prop_assert_eq!(t.apply(x), pair.apply(x));
        }
    }

    #[test]
    fn britton_reduction_is_idempotent(seed in any::<u64>(), p in prime(), len in 0usize..14) {
        let pair = pair_from(seed, p, 81);
        let g = pair.group();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let w = random_word(&mut rng, &pair, len);
        let r = britton_reduce(&pair, &w);
        prop_assert_eq!(&britton_reduce(&pair, &r), &r);
        prop_assert!(r.t_length() <= w.t_length());
        let trivial = britton_reduce(&pair, &w.concat(g, &w.inverse(g)));
        prop_assert_eq!(trivial.as_base(), Some(g.identity()));
    }

    #[test]
    fn abelian_routes_agree(seed in any::<u64>(), p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = random::random_abelian_pair(&mut rng, p, 4).unwrap();
        let ab = decide_abelian(&pair).unwrap();
        prop_assert_eq!(ab.verdict, decide_chief(&pair, DEFAULT_CAP).unwrap().verdict);
    }

    #[test]
    fn certificates_round_trip(seed in any::<u64>(), p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = random::random_abelian_pair(&mut rng, p, 3).unwrap();
        let exponents = pair.group().abelian_exponents().unwrap().to_vec();
        let spec = ProblemSpec::from_pair(GroupSpec::Abelian { p, exponents }, &pair);
        let cert = problem::decide(&spec).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let report = problem::verify_certificate(&back).unwrap();
        prop_assert!(report.ok, "{:?}", report.checks);
    }

    #[test]
    fn obstructions_bracket_the_answer(seed in any::<u64>(), p in prime()) {
        let pair = pair_from(seed, p, 81);
        let chief = decide_chief(&pair, DEFAULT_CAP).unwrap().verdict;
        if obstruction_toplevel(&pair).unwrap().is_some() {
            prop_assert_ne!(chief, Verdict::ResiduallyP);
        }
        let lcs = Filtration::new(lower_central_series(pair.group(), DEFAULT_CAP).unwrap()).unwrap();
        if is_compatible(&pair, &lcs) {
            let layer = sufficient_layerwise(&pair, &lcs, DEFAULT_CAP).unwrap().holds;
            let quot = sufficient_quotient(&pair, &lcs, DEFAULT_CAP).unwrap().holds;
            if layer || quot {
                prop_assert_eq!(chief, Verdict::ResiduallyP);
            }
        }
    }
}
