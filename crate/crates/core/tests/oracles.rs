mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use clab::classes::{gen_parity, gen_pmon};
use clab::cli::verify::{metric_pool, random_class};
use clab::exact::MinimaxOracle;
use clab::learners::InjectiveLearner;
use clab::metrics::Metric;
use clab::oracles::{CsInjective, CsMin, CsProx, FirstByIndex, LastByIndex, NoContrast, SeededRandom};
use clab::protocol::{ChoiceContext, CsContext};
use clab::{
    run_protocol, Caps, Concept, ConceptClass, ContrastSet, FiniteDomain, OracleStrategy, ProtocolConfig, Query,
    Rational, VersionSpace,
};

fn set_of(cs: &dyn ContrastSet, class: &Arc<ConceptClass>, concept: usize, query: &Query) -> Vec<usize> {
    let vs = VersionSpace::full(class.clone());
    cs.contrast_set(query, &CsContext { class, concept, vs: &vs, round: 0 })
}

fn index_of(class: &ConceptClass, bits: &str) -> usize {
    class.find(&Concept::parse(bits).unwrap()).unwrap()
}

#[test]
fn minimum_distance_examples() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let v1 = index_of(&class, "0011");
    let one = index_of(&class, "1111");
    let ham = CsMin::new(Metric::Hamming);
    assert_eq!(set_of(&ham, &class, v1, &Query::at(0b00)), [0b10]);
    assert!(set_of(&ham, &class, one, &Query::at(0b01)).is_empty());
    let d0 = CsMin::new(Metric::Discrete);
    assert_eq!(set_of(&d0, &class, v1, &Query::at(0b00)), [0b10, 0b11]);
}

#[test]
fn proximity_examples() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let both = index_of(&class, "0001");
    let prox = CsProx::new(Metric::Hamming).unwrap();
    assert!(set_of(&prox, &class, both, &Query::within(0, Rational::from_integer(1))).is_empty());
    assert_eq!(set_of(&prox, &class, both, &Query::within(0, Rational::from_integer(2))), [0b11]);
    let v1 = index_of(&class, "0011");
    assert_eq!(set_of(&prox, &class, v1, &Query::within(0, Rational::from_integer(9))), [0b10, 0b11]);
}

#[test]
fn minimum_set_inside_proximity_and_discrete_sets() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(8);
    for _ in 0..40 {
        let class = Arc::new(random_class(&mut rng, 5, 8));
        let n = class.n();
        for (_, metric) in metric_pool(n, &mut rng) {
            let min = CsMin::new(metric.clone());
            let prox = CsProx::new(metric.clone()).unwrap();
            let d0 = CsMin::new(Metric::Discrete);
            for c in 0..class.len() {
                let constant = class.concept(c).constant_value().is_some();
                for x in 0..n {
                    let m = set_of(&min, &class, c, &Query::at(x));
                    let all = set_of(&d0, &class, c, &Query::at(x));
                    assert_eq!(m.is_empty(), constant);
                    assert_eq!(all.is_empty(), constant);
                    assert!(m.iter().all(|y| all.contains(y)));
                    if let Some(r) = min.nearest_opposite(&class, c, x) {
                        let p = set_of(&prox, &class, c, &Query::within(x, r));
                        assert!(m.iter().all(|y| p.contains(y)));
                    }
                }
            }
        }
    }
}

#[test]
fn injective_examples() {
    // T(C_0) = {x3, x5} with the identity enumeration of x1..x6
    let class = ConceptClass::parse_spec("domain 6\n000000\n100000\n").unwrap();
    let cs = CsInjective::parse(&class, "2 4\n0\n").unwrap();
    let class = Arc::new(class);
    assert_eq!(set_of(&cs, &class, 0, &Query::at(0)), [2]);
    assert_eq!(set_of(&cs, &class, 0, &Query::at(3)), [4]);
    assert!(set_of(&cs, &class, 0, &Query::at(5)).is_empty());
}

#[test]
fn injective_enumeration_and_errors() {
    let class = ConceptClass::parse_spec("domain 3\n000\n100\n").unwrap();
    let cs = CsInjective::parse(&class, "enumeration 2 0 1\n0\n-\n").unwrap();
    assert_eq!(cs.enumeration(), [2, 0, 1]);
    assert_eq!(cs.position(0), 1);
    let class_arc = Arc::new(class.clone());
    assert_eq!(set_of(&cs, &class_arc, 0, &Query::at(2)), [0]);
    assert!(set_of(&cs, &class_arc, 0, &Query::at(1)).is_empty());
    assert!(set_of(&cs, &class_arc, 1, &Query::at(2)).is_empty());
    assert!(CsInjective::parse(&class, "1\n1\n").is_err());
    assert!(CsInjective::parse(&class, "enumeration 0 0 1\n0\n1\n").is_err());
    assert!(CsInjective::parse(&class, "7\n1\n").is_err());
    assert!(CsInjective::parse(&class, "1\n").is_err());
    assert!(matches!(CsInjective::parse(&class, "x\n1\n"), Err(clab::Error::Parse { line: 1, .. })));
}

#[test]
fn injective_images_may_be_nested() {
    let class = ConceptClass::parse_spec("domain 4\n0000\n1000\n0100\n").unwrap();
    let cs = Arc::new(CsInjective::parse(&class, "0\n0 1\n-\n").unwrap());
    let class = Arc::new(class);
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    for t in 0..3 {
        let trace = run_protocol(&cfg, &mut InjectiveLearner::new(cs.clone()), &mut FirstByIndex, t).unwrap();
        assert_eq!(trace.final_vs.singleton(), Some(t));
        assert!(trace.queries() <= 3);
    }
}

#[test]
fn strategies_on_trivial_sets() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let vs = VersionSpace::full(class.clone());
    let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
    let mut strategies: Vec<Box<dyn OracleStrategy>> = vec![
        Box::new(FirstByIndex),
        Box::new(LastByIndex),
        Box::new(SeededRandom::new(1)),
        Box::new(MinimaxOracle::new(class.clone(), cs.clone(), &Caps::default())),
    ];
    for s in strategies.iter_mut() {
        let q = Query::at(0);
        let empty = ChoiceContext { query: &q, target: 0, vs: &vs, admissible: &[], round: 0, cs: cs.as_ref() };
        assert_eq!(s.choose(&empty).unwrap(), None, "{}", s.name());
        let single = ChoiceContext { query: &q, target: 1, vs: &vs, admissible: &[0b10], round: 0, cs: cs.as_ref() };
        assert_eq!(s.choose(&single).unwrap(), Some(0b10), "{}", s.name());
    }
    assert_eq!(SeededRandom::new(9).seed(), Some(9));
    assert_eq!(SeededRandom::new(9).name(), "random:seed=9");
}

#[test]
fn seeded_random_is_reproducible() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let vs = VersionSpace::full(class.clone());
    let cs = NoContrast;
    let q = Query::at(0);
    let admissible = [0, 1, 2, 3];
    let ctx = ChoiceContext { query: &q, target: 0, vs: &vs, admissible: &admissible, round: 0, cs: &cs };
    let run = |seed| {
        let mut s = SeededRandom::new(seed);
        (0..20).map(|_| s.choose(&ctx).unwrap().unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(run(4), run(4));
    assert_ne!(run(4), run(5));
}

#[test]
fn minimax_adversary_on_parity_flips_a_bit() {
    let class = Arc::new(gen_parity(2, &Caps::default()).unwrap());
    let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
    let target = class.find(&Concept::from_fn(4, |x| common::bits(x, 2)[0] ^ common::bits(x, 2)[1])).unwrap();
    let vs = VersionSpace::full(class.clone());
    let mut oracle = MinimaxOracle::new(class.clone(), cs.clone(), &Caps::default());
    let q = Query::at(0b00);
    let admissible = set_of(cs.as_ref(), &class, target, &q);
    assert_eq!(admissible, [0b01, 0b10]);
    let ctx = ChoiceContext { query: &q, target, vs: &vs, admissible: &admissible, round: 0, cs: cs.as_ref() };
    let pick = oracle.choose(&ctx).unwrap().unwrap();
    // both flips leave two parities; ties go to the lowest index
    assert_eq!(pick, 0b01);
    let ans = clab::OracleAnswer::point(false, pick, true);
    assert_eq!(clab::restrict_version_space(&vs, &q, &ans, cs.as_ref(), 0).len(), 2);
}

#[test]
fn parity_adversary_keeps_two_concepts_before_the_last_round() {
    for m in 2..=4 {
        let class = Arc::new(gen_parity(m, &Caps::default()).unwrap());
        let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
        let cfg = ProtocolConfig::new(class.clone(), cs.clone());
        let game = Arc::new(clab::exact::ContrastGame::new(class.clone(), cs.clone()));
        for t in (0..class.len()).filter(|&t| class.concept(t).constant_value().is_none()) {
            let mut oracle = MinimaxOracle::new(class.clone(), cs.clone(), &Caps::default());
            let trace = run_protocol(&cfg, &mut clab::learners::HalvingLearner::new(game.clone()), &mut oracle, t).unwrap();
            for rec in trace.records.iter().take((m - 1).saturating_sub(1)) {
                assert!(rec.vs_size >= 2, "m={} target {} round {}", m, class.concept(t), rec.round);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strategies_pick_admissible_points(seed in any::<u64>(), picks in proptest::collection::btree_set(0usize..16, 1..8)) {
        let class = Arc::new(ConceptClass::new(FiniteDomain::new(16), vec![Concept::from_fn(16, |_| false)]).unwrap());
        let vs = VersionSpace::full(class.clone());
        let cs = NoContrast;
        let admissible: Vec<usize> = picks.into_iter().collect();
        let q = Query::at(0);
        let ctx = ChoiceContext { query: &q, target: 0, vs: &vs, admissible: &admissible, round: 0, cs: &cs };
        for mut s in [Box::new(FirstByIndex) as Box<dyn OracleStrategy>, Box::new(LastByIndex), Box::new(SeededRandom::new(seed))] {
            let pick = s.choose(&ctx).unwrap().unwrap();
            prop_assert!(admissible.contains(&pick));
        }
    }
}
