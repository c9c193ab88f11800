mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use clab::classes::{gen_parity, gen_pmon};
use clab::cli::verify::{metric_pool, random_class};
use clab::exact::{ContrastGame, MinimaxOracle};
use clab::learners::{HalvingLearner, PmonLearner};
use clab::metrics::Metric;
use clab::oracles::{CsMin, CsProx, FirstByIndex, SeededRandom};
use clab::protocol::{epsilon_approximates, replay, InteractionRecord};
use clab::{
    delta, restrict_version_space, run_protocol, Caps, Concept, ConceptClass, ContrastSet, Error, FiniteDomain,
    Learner, OracleAnswer, Outcome, ProtocolConfig, Query, Rational, VersionSpace,
};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn concept(s: &str) -> Concept {
    Concept::parse(s).unwrap()
}

/// Queries the instances in order, never stopping early.
#[derive(Clone)]
struct Sweep(usize);

impl Learner for Sweep {
    fn next_query(&mut self, vs: &VersionSpace) -> clab::Result<Option<Query>> {
        let n = vs.class().n();
        self.0 += 1;
        Ok((self.0 <= n).then(|| Query::at(self.0 - 1)))
    }

    fn observe(&mut self, _q: &Query, _a: &OracleAnswer, _vs: &VersionSpace) -> clab::Result<()> {
        Ok(())
    }
}

#[test]
fn delta_examples() {
    let a = concept("0001");
    assert_eq!(delta(&a, &a).unwrap(), r(0, 1));
    assert_eq!(delta(&a, &concept("0111")).unwrap(), r(1, 2));
    assert_eq!(delta(&a, &a.complement()).unwrap(), r(1, 1));
    assert!(matches!(delta(&a, &concept("01")), Err(Error::DomainMismatch(_))));
}

#[test]
fn restriction_examples() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let cs = CsMin::new(Metric::Hamming);
    let vs = VersionSpace::full(class.clone());
    let after = restrict_version_space(&vs, &Query::at(0), &OracleAnswer::omega(true), &cs, 0);
    assert_eq!(after.members().map(|c| class.concept(c).bit_string()).collect::<Vec<_>>(), ["1111"]);
    let after = restrict_version_space(&vs, &Query::at(0), &OracleAnswer::point(false, 0b11, true), &cs, 0);
    assert_eq!(after.members().map(|c| class.concept(c).bit_string()).collect::<Vec<_>>(), ["0001"]);
    // every member labels 11 positive and the contrast set ignores the label
    let none = clab::oracles::NoContrast;
    let same = restrict_version_space(&vs, &Query::at(0b11), &OracleAnswer::omega(true), &none, 0);
    assert_eq!(same.len(), vs.len());
}

#[test]
fn restriction_can_empty_the_version_space() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let vs = VersionSpace::full(class);
    let cs = CsMin::new(Metric::Hamming);
    let after = restrict_version_space(&vs, &Query::at(0b11), &OracleAnswer::omega(false), &cs, 0);
    assert!(after.is_empty());
}

#[test]
fn pmon_target_found_in_one_round() {
    let class = Arc::new(gen_pmon(3, &Caps::default()).unwrap());
    let target = class.find(&Concept::from_labels(&common::monomial(3, &[0, 2]))).unwrap();
    let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(Metric::Hamming)));
    for oracle in [&mut FirstByIndex as &mut dyn clab::OracleStrategy, &mut SeededRandom::new(3)] {
        let trace = run_protocol(&cfg, &mut PmonLearner::new(3), oracle, target).unwrap();
        assert_eq!(trace.queries(), 1);
        assert_eq!(trace.outcome, Outcome::Identified);
        assert_eq!(trace.final_vs.singleton(), Some(target));
    }
}

#[test]
fn singleton_class_needs_no_rounds() {
    let class = Arc::new(ConceptClass::new(FiniteDomain::new(4), vec![concept("0110")]).unwrap());
    let cfg = ProtocolConfig::new(class, Arc::new(CsMin::new(Metric::Discrete)));
    let trace = run_protocol(&cfg, &mut Sweep(0), &mut FirstByIndex, 0).unwrap();
    assert_eq!(trace.queries(), 0);
    assert_eq!(trace.outcome, Outcome::Identified);
}

#[test]
fn halving_on_parity_needs_two_rounds_against_the_adversary() {
    let class = Arc::new(gen_parity(3, &Caps::default()).unwrap());
    let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    let game = Arc::new(ContrastGame::new(class.clone(), cs.clone()));
    let target = class.find(&Concept::from_fn(8, |x| common::bits(x, 3)[0] ^ common::bits(x, 3)[1])).unwrap();
    let mut oracle = MinimaxOracle::new(class.clone(), cs, &Caps::default());
    let trace = run_protocol(&cfg, &mut HalvingLearner::new(game), &mut oracle, target).unwrap();
    assert!(trace.queries() >= 2, "{} rounds", trace.queries());
    assert_eq!(trace.outcome, Outcome::Identified);
}

#[test]
fn learner_that_gives_up_is_exhausted() {
    let class = Arc::new(ConceptClass::parse_spec("domain 2\n00\n01\n").unwrap());
    let cfg = ProtocolConfig::new(class, Arc::new(clab::oracles::NoContrast));
    struct Idle;
    impl Learner for Idle {
        fn next_query(&mut self, _vs: &VersionSpace) -> clab::Result<Option<Query>> {
            Ok(None)
        }
        fn observe(&mut self, _q: &Query, _a: &OracleAnswer, _vs: &VersionSpace) -> clab::Result<()> {
            Ok(())
        }
    }
    let trace = run_protocol(&cfg, &mut Idle, &mut FirstByIndex, 1).unwrap();
    assert_eq!(trace.outcome, Outcome::Exhausted);
}

#[test]
fn uninformative_queries_are_reported() {
    let class = Arc::new(ConceptClass::parse_spec("domain 2\n00\n01\n").unwrap());
    let cfg = ProtocolConfig::new(class, Arc::new(clab::oracles::NoContrast));
    struct Stuck;
    impl Learner for Stuck {
        fn next_query(&mut self, _vs: &VersionSpace) -> clab::Result<Option<Query>> {
            Ok(Some(Query::at(0)))
        }
        fn observe(&mut self, _q: &Query, _a: &OracleAnswer, _vs: &VersionSpace) -> clab::Result<()> {
            Ok(())
        }
    }
    let err = run_protocol(&cfg, &mut Stuck, &mut FirstByIndex, 0).unwrap_err();
    assert!(matches!(err, Error::NonLearnable), "{:?}", err);
}

#[test]
fn dishonest_oracle_is_caught() {
    struct Liar;
    impl clab::OracleStrategy for Liar {
        fn name(&self) -> String {
            "liar".into()
        }
        fn choose(&mut self, _ctx: &clab::protocol::ChoiceContext) -> clab::Result<Option<usize>> {
            Ok(Some(0))
        }
    }
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let cfg = ProtocolConfig::new(class, Arc::new(CsMin::new(Metric::Hamming)));
    let err = run_protocol(&cfg, &mut PmonLearner::new(2), &mut Liar, 1).unwrap_err();
    assert!(matches!(err, Error::DishonestOracle(_)));
}

#[test]
fn epsilon_examples() {
    let class = Arc::new(ConceptClass::parse_spec("domain 4\n0001\n0111\n").unwrap());
    let full = VersionSpace::full(class.clone());
    let target = concept("0001");
    assert!(epsilon_approximates(&full, &target, r(1, 2)).unwrap());
    assert!(!epsilon_approximates(&full, &target, r(1, 4)).unwrap());
    let only = full.retain(|c| c == 0);
    assert!(epsilon_approximates(&only, &target, r(0, 1)).unwrap());
    let pmon = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    assert!(!epsilon_approximates(&VersionSpace::full(pmon), &concept("1111"), r(0, 1)).unwrap());
}

#[test]
fn approximate_mode_stops_early() {
    let class = Arc::new(ConceptClass::parse_spec("domain 4\n0001\n0011\n1111\n").unwrap());
    let cfg = ProtocolConfig::new(class, Arc::new(clab::oracles::NoContrast)).approximate(r(1, 4));
    // after querying instance 0 the survivors 0001 and 0011 are 1/4 apart
    let trace = run_protocol(&cfg, &mut Sweep(0), &mut FirstByIndex, 0).unwrap();
    assert_eq!(trace.queries(), 1);
    assert_eq!(trace.outcome, Outcome::Approximated);
    assert_eq!(trace.final_vs.len(), 2);
}

#[test]
fn class_spec_loader() {
    let c = ConceptClass::parse_spec("# comment\ndomain 3\n101\n010 # trailing\n").unwrap();
    assert_eq!(c.len(), 2);
    assert!(matches!(ConceptClass::parse_spec("domain 2\n01\n01\n"), Err(Error::DuplicateConcept(3))));
    assert!(matches!(ConceptClass::parse_spec("domain 2\n011\n"), Err(Error::DomainMismatch(_))));
    assert!(matches!(ConceptClass::parse_spec("101\n"), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(ConceptClass::parse_spec("domain 2\n0x\n"), Err(Error::Parse { line: 2, .. })));
}

#[test]
fn trace_json_lines_round_trip() {
    let class = Arc::new(gen_pmon(3, &Caps::default()).unwrap());
    let cs = Arc::new(CsProx::new(Metric::Hamming).unwrap());
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    let game = Arc::new(ContrastGame::new(class.clone(), cs.clone()));
    let trace = run_protocol(&cfg, &mut HalvingLearner::new(game), &mut SeededRandom::new(5), 6).unwrap();
    let text = trace.to_jsonl(serde_json::json!({ "class": "pmon:m=3" }));
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["header"]["class"], "pmon:m=3");
    let records: Vec<InteractionRecord> = lines
        .enumerate()
        .map(|(i, l)| InteractionRecord::from_json(i, &serde_json::from_str(l).unwrap()).unwrap())
        .collect();
    assert_eq!(records, trace.records);
    assert!(records.iter().all(|r| r.query.radius.is_some()));
    let vs = replay(class, cs.as_ref(), &records).unwrap();
    assert_eq!(vs.mask(), trace.final_vs.mask());
}

#[test]
fn tampered_trace_fails_replay() {
    let class = Arc::new(gen_pmon(2, &Caps::default()).unwrap());
    let cs = CsMin::new(Metric::Hamming);
    let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(Metric::Hamming)));
    let mut trace = run_protocol(&cfg, &mut PmonLearner::new(2), &mut FirstByIndex, 2).unwrap();
    trace.records[0].vs_size += 1;
    assert!(matches!(replay(class, &cs, &trace.records), Err(Error::InconsistentOracle(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn honest_runs_are_monotone_sound_and_replayable(seed in any::<u64>(), pick in 0usize..5, prox in any::<bool>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let class = Arc::new(random_class(&mut rng, 5, 8));
        let metric = metric_pool(class.n(), &mut rng).swap_remove(pick).1;
        let cs: Arc<dyn ContrastSet> = if prox {
            Arc::new(CsProx::new(metric).unwrap())
        } else {
            Arc::new(CsMin::new(metric))
        };
        let cfg = ProtocolConfig::new(class.clone(), cs.clone());
        let game = Arc::new(ContrastGame::new(class.clone(), cs.clone()));
        for target in 0..class.len() {
            let trace = run_protocol(&cfg, &mut HalvingLearner::new(game.clone()), &mut SeededRandom::new(seed), target).unwrap();
            prop_assert_eq!(trace.outcome, Outcome::Identified);
            let mut prev = VersionSpace::full(class.clone());
            for rec in &trace.records {
                let next = restrict_version_space(&prev, &rec.query, &rec.answer, cs.as_ref(), rec.round);
                prop_assert!(next.members().all(|c| prev.contains(c)));
                prop_assert!(next.contains(target));
                prop_assert_eq!(next.len(), rec.vs_size);
                prev = next;
            }
            let replayed = replay(class.clone(), cs.as_ref(), &trace.records).unwrap();
            prop_assert_eq!(replayed.mask(), trace.final_vs.mask());
        }
    }
}
