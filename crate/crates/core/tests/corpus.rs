use hnnp::corpus::{self, Source};

#[test]
fn every_fixture_fact_holds() {
    for f in corpus::all_fixtures().unwrap() {
        for o in f.verify() {
            assert!(o.passed, "{} {}: expected {:?}, observed {}", f.name, o.name, o.expected, o.observed);
            if o.source != Source::Recorded {
                assert!(o.expected.is_some());
            }
        }
    }
}

#[test]
fn fixtures_rebuild_identically() {
    for name in corpus::FIXTURE_NAMES {
        let (x, y) = (corpus::by_name(name).unwrap(), corpus::by_name(name).unwrap());
        assert_eq!(x.pair.a().elements(), y.pair.a().elements());
        assert_eq!(x.pair.phi().images(), y.pair.phi().images());
        assert_eq!(x.pair.b().elements(), y.pair.b().elements());
    }
}
