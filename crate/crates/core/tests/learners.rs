mod common;

use std::sync::{Arc, Mutex};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use clab::classes::*;
use clab::exact::{exact_ex_mq_complexity, ContrastGame, ExMqGame, MinimaxOracle, Solver};
use clab::learners::*;
use clab::metrics::Metric;
use clab::oracles::{CsInjective, CsMin, CsProx, FirstByIndex, LastByIndex, NoContrast, SeededRandom};
use clab::{run_protocol, Caps, Concept, ConceptClass, ContrastSet, Error, Outcome, ProtocolConfig};

fn caps() -> Caps {
    Caps::default()
}

fn ceil_log2(v: usize) -> usize {
    (usize::BITS - (v.max(1) - 1).leading_zeros()) as usize
}

fn min_cfg(class: &Arc<ConceptClass>, metric: Metric) -> ProtocolConfig {
    ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(metric)))
}

#[test]
fn pmon_learner_examples() {
    let class = Arc::new(gen_pmon(3, &caps()).unwrap());
    let cfg = min_cfg(&class, Metric::Hamming);
    let target = class.find(&Concept::from_labels(&common::monomial(3, &[0, 2]))).unwrap();
    let trace = run_protocol(&cfg, &mut PmonLearner::new(3), &mut FirstByIndex, target).unwrap();
    assert_eq!(trace.records[0].query.point, 0);
    assert_eq!(trace.records[0].answer, clab::OracleAnswer::point(false, 0b101, true));
    let one = class.find(&Concept::parse("11111111").unwrap()).unwrap();
    let trace = run_protocol(&cfg, &mut PmonLearner::new(3), &mut FirstByIndex, one).unwrap();
    assert_eq!(trace.records[0].answer, clab::OracleAnswer::omega(true));
    for m in 1..=5 {
        let class = Arc::new(gen_pmon(m, &caps()).unwrap());
        let worst = worst_case_queries(&min_cfg(&class, Metric::Hamming), &PmonLearner::new(m), 0..class.len()).unwrap();
        assert_eq!(worst, Some(1), "m={}", m);
    }
}

#[test]
fn mon_claus_learner_needs_two_queries() {
    for m in 1..=4 {
        let class = Arc::new(gen_dl(m, 1, &caps()).unwrap());
        let worst = worst_case_queries(&min_cfg(&class, Metric::Hamming), &MonClausLearner::new(m), 0..class.len()).unwrap();
        assert_eq!(worst, Some(if m == 1 { 1 } else { 2 }), "m={}", m);
    }
}

#[test]
fn mon_claus_learner_examples() {
    let class = Arc::new(gen_monclaus(2, &caps()).unwrap());
    let cfg = min_cfg(&class, Metric::Hamming);
    // v1 and not v2: points 00, 01, 10, 11 are labelled 0, 0, 1, 0
    let target = class.find(&Concept::parse("0010").unwrap()).unwrap();
    let trace = run_protocol(&cfg, &mut MonClausLearner::new(2), &mut FirstByIndex, target).unwrap();
    assert_eq!(trace.queries(), 2);
    assert!(trace.records.iter().all(|r| !r.answer.label));
    assert_eq!(trace.final_vs.singleton(), Some(target));
    let one = class.find(&Concept::parse("1111").unwrap()).unwrap();
    let trace = run_protocol(&cfg, &mut MonClausLearner::new(2), &mut FirstByIndex, one).unwrap();
    assert_eq!(trace.queries(), 1);
}

#[test]
fn proximity_wrapper_budgets() {
    let class = Arc::new(gen_pmon(4, &caps()).unwrap());
    let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsProx::new(Metric::Hamming).unwrap()));
    let learner = ProxFromMin::new(PmonLearner::new(4), class.clone(), Metric::Hamming).unwrap();
    assert!(worst_case_queries(&cfg, &learner, 0..class.len()).unwrap().unwrap() <= 2);
    for m in 2..=4 {
        let class = Arc::new(gen_monclaus(m, &caps()).unwrap());
        let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsProx::new(Metric::Hamming).unwrap()));
        let learner = ProxFromMin::new(MonClausLearner::new(m), class.clone(), Metric::Hamming).unwrap();
        let worst = worst_case_queries(&cfg, &learner, 0..class.len()).unwrap().unwrap();
        assert!(worst <= 2 * ceil_log2(m), "m={} worst={}", m, worst);
    }
}

#[test]
fn proximity_wrapper_under_discrete_metric() {
    let class = Arc::new(gen_pmon(3, &caps()).unwrap());
    let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsProx::new(Metric::Discrete).unwrap()));
    let inner = CertificateLearner::new(Arc::new(Mutex::new(Solver::new(
        ContrastGame::new(class.clone(), Arc::new(CsMin::new(Metric::Discrete))),
        &caps(),
    ))));
    let learner = ProxFromMin::new(inner, class.clone(), Metric::Discrete).unwrap();
    for t in 0..class.len() {
        let mut l = learner.clone();
        let trace = run_protocol(&cfg, &mut l, &mut FirstByIndex, t).unwrap();
        let per_inner = l.queries_per_inner();
        assert!(per_inner.iter().all(|&q| q <= 1), "{:?}", per_inner);
        assert_eq!(trace.outcome, Outcome::Identified);
    }
}

#[test]
fn ex_mq_transformers() {
    let class = Arc::new(gen_singletons(4, &caps()).unwrap());
    let solver = Arc::new(Mutex::new(Solver::new(ExMqGame::new(class.clone()), &caps())));
    let cfg = min_cfg(&class, Metric::Discrete);
    for t in 0..4 {
        let mut calls = run_ex_mq(class.clone(), &mut ExMqCertificateLearner::new(solver.clone()), t, &mut |_| 0).unwrap();
        assert_eq!(calls, 1);
        let mut l = ContrastFromExMq::new(ExMqCertificateLearner::new(solver.clone()), class.clone());
        let trace = run_protocol(&cfg, &mut l, &mut FirstByIndex, t).unwrap();
        assert_eq!(trace.queries(), 1);
        let inner = CertificateLearner::new(Arc::new(Mutex::new(Solver::new(
            ContrastGame::new(class.clone(), Arc::new(CsMin::new(Metric::Discrete))),
            &caps(),
        ))));
        calls = run_ex_mq(class.clone(), &mut ExMqFromContrast::new(inner, class.clone()), t, &mut |p| p.len() - 1).unwrap();
        assert!(calls <= 1 + 2);
    }
}

#[test]
fn ex_mq_transformers_on_random_classes() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(13);
    for _ in 0..30 {
        let class = Arc::new(clab::cli::verify::random_class(&mut rng, 4, 8));
        let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Discrete));
        let contrast = Arc::new(Mutex::new(Solver::new(ContrastGame::new(class.clone(), cs.clone()), &caps())));
        let q = contrast.lock().unwrap().root_value().unwrap().finite().unwrap() as usize;
        let exmq = exact_ex_mq_complexity(class.clone(), &caps()).unwrap().value.finite().unwrap() as usize;
        let ex_solver = Arc::new(Mutex::new(Solver::new(ExMqGame::new(class.clone()), &caps())));
        let cfg = ProtocolConfig::new(class.clone(), cs.clone());
        for t in 0..class.len() {
            let mut oracle = MinimaxOracle::new(class.clone(), cs.clone(), &caps());
            let mut up = ContrastFromExMq::new(ExMqCertificateLearner::new(ex_solver.clone()), class.clone());
            assert!(run_protocol(&cfg, &mut up, &mut oracle, t).unwrap().queries() <= exmq);
            let mut down = ExMqFromContrast::new(CertificateLearner::new(contrast.clone()), class.clone());
            assert!(run_ex_mq(class.clone(), &mut down, t, &mut |_| 0).unwrap() <= q + 2);
        }
    }
}

#[test]
fn vcd1_learner_two_queries() {
    let mut classes = vec![vcd1_example()];
    for n in 2..=6 {
        classes.push(gen_singletons(n, &caps()).unwrap());
    }
    for class in classes {
        let cons = Arc::new(vcd1_metric(&class).unwrap());
        let class = Arc::new(class);
        let cfg = min_cfg(&class, cons.metric.clone());
        let worst = worst_case_queries(&cfg, &Vcd1Learner::new(cons.clone()), 0..class.len()).unwrap();
        assert!(worst.unwrap() <= 2, "{:?}", worst);
    }
}

#[test]
fn mdnf_dynamic_learner_examples() {
    let class = Arc::new(gen_mdnf(3, 2, 2, &caps()).unwrap());
    let cfg = min_cfg(&class, Metric::VersionSpaceInduced);
    let target = class
        .find(&Concept::from_fn(8, |x| {
            let b = common::bits(x, 3);
            b[0] || (b[1] && b[2])
        }))
        .unwrap();
    for oracle in [&mut FirstByIndex as &mut dyn clab::OracleStrategy, &mut LastByIndex] {
        let trace = run_protocol(&cfg, &mut MdnfDynamicLearner::new(3, 2), oracle, target).unwrap();
        assert!(trace.queries() <= 2);
        let first = trace.records[0].answer.contrast;
        assert!(matches!(first, clab::Contrast::Point { x: 0b100 | 0b011, .. }), "{:?}", first);
    }
    let zero = class.find(&Concept::parse("00000000").unwrap()).unwrap();
    let trace = run_protocol(&cfg, &mut MdnfDynamicLearner::new(3, 2), &mut FirstByIndex, zero).unwrap();
    assert_eq!(trace.queries(), 1);
    assert_eq!(trace.records[0].answer, clab::OracleAnswer::omega(false));
    for (m, s, z) in [(3, 2, 2), (4, 2, 1)] {
        let class = Arc::new(gen_mdnf(m, s, z, &caps()).unwrap());
        let worst = worst_case_queries(&min_cfg(&class, Metric::VersionSpaceInduced), &MdnfDynamicLearner::new(m, s), 0..class.len());
        assert!(worst.unwrap().unwrap() <= s);
    }
}

#[test]
fn injective_learner_bounds() {
    // distinct singletons: one query
    let class = ConceptClass::parse_spec("domain 5\n00000\n10000\n01000\n00100\n00010\n").unwrap();
    let cs = Arc::new(CsInjective::parse(&class, "0\n1\n2\n3\n4\n").unwrap());
    let class = Arc::new(class);
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    assert_eq!(worst_case_queries(&cfg, &InjectiveLearner::new(cs.clone()), 0..5).unwrap(), Some(1));
    // antichain of 2-sets over six points
    let class = ConceptClass::parse_spec("domain 6\n000000\n100000\n010000\n").unwrap();
    let cs = Arc::new(CsInjective::parse(&class, "0 3\n1 4\n2 5\n").unwrap());
    let class = Arc::new(class);
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    assert!(worst_case_queries(&cfg, &InjectiveLearner::new(cs.clone()), 0..3).unwrap().unwrap() <= 2);
    // empty image: omega on the first query
    let class = ConceptClass::parse_spec("domain 3\n000\n100\n").unwrap();
    let cs = Arc::new(CsInjective::parse(&class, "-\n1\n").unwrap());
    let class = Arc::new(class);
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    let trace = run_protocol(&cfg, &mut InjectiveLearner::new(cs.clone()), &mut FirstByIndex, 0).unwrap();
    assert_eq!(trace.queries(), 1);
    assert_eq!(trace.records[0].answer.contrast, clab::Contrast::Omega);
}

#[test]
fn halving_baseline_examples() {
    let class = Arc::new(gen_pmon(3, &caps()).unwrap());
    let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
    let game = Arc::new(ContrastGame::new(class.clone(), cs.clone()));
    let cfg = ProtocolConfig::new(class.clone(), cs);
    assert_eq!(worst_case_queries(&cfg, &HalvingLearner::new(game), 0..8).unwrap(), Some(1));
    let class = Arc::new(ConceptClass::parse_spec("domain 2\n00\n01\n").unwrap());
    let cs: Arc<dyn ContrastSet> = Arc::new(NoContrast);
    let game = Arc::new(ContrastGame::new(class.clone(), cs.clone()));
    let cfg = ProtocolConfig::new(class.clone(), cs);
    let mut learner = HalvingLearner::new(game).with_query_pool(vec![0]);
    assert!(matches!(run_protocol(&cfg, &mut learner, &mut FirstByIndex, 0), Err(Error::NonLearnable)));
}

#[test]
fn sd_from_contrast_on_pmon() {
    let class = Arc::new(gen_pmon(3, &caps()).unwrap());
    for c in class.concepts() {
        let mut learner = SdFromContrast::new(PmonLearner::new(3), class.clone(), Metric::Hamming).unwrap();
        let trace = run_self_directed(&mut learner, c).unwrap();
        assert!(trace.mistakes <= 2);
        assert!(trace.mistakes <= 2 * learner.inner_queries().max(1));
        assert_eq!(trace.steps.len(), 8);
    }
}

#[test]
fn sd_dl_learner_examples() {
    let lit = |var, positive| Literal { var, positive };
    let l = DecisionList::new(3, vec![(lit(0, true), true), (lit(1, true), false)], true).unwrap();
    let mut learner = SdDecisionListLearner::new(3);
    let trace = run_self_directed(&mut learner, &l.to_concept()).unwrap();
    assert!(trace.mistakes <= 4 * 2 * 3);
    let one = Concept::from_fn(8, |_| true);
    let trace = run_self_directed(&mut SdDecisionListLearner::new(3), &one).unwrap();
    assert!(trace.mistakes <= 4 * 3);
}

#[test]
fn sd_dl_learner_on_every_small_list() {
    for m in 1..=3 {
        for l in dl_lists(m, m, &caps()).unwrap() {
            let k = blocks_of(&l).len().max(1);
            let trace = run_self_directed(&mut SdDecisionListLearner::new(m), &l.to_concept()).unwrap();
            assert!(trace.mistakes <= 4 * k * m, "{} made {}", l, trace.mistakes);
        }
    }
}

#[test]
fn sd_mdnf_learner_examples() {
    let f = Concept::from_fn(8, |x| common::bits(x, 3)[0] || common::bits(x, 3)[1]);
    let trace = run_self_directed(&mut SdMdnfLearner::new(3), &f).unwrap();
    assert_eq!(trace.mistakes, 2);
    assert_eq!(trace.mistake_points(), [0b010, 0b100]);
    let zero = Concept::from_fn(8, |_| false);
    assert_eq!(run_self_directed(&mut SdMdnfLearner::new(3), &zero).unwrap().mistakes, 0);
    for c in gen_mdnf(4, 2, 2, &caps()).unwrap().concepts() {
        assert!(run_self_directed(&mut SdMdnfLearner::new(4), c).unwrap().mistakes <= 2);
    }
}

#[test]
fn learners_survive_every_oracle_strategy() {
    let class = Arc::new(gen_monclaus(3, &caps()).unwrap());
    let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    for t in 0..class.len() {
        let mut oracles: Vec<Box<dyn clab::OracleStrategy>> = vec![
            Box::new(FirstByIndex),
            Box::new(LastByIndex),
            Box::new(SeededRandom::new(t as u64)),
            Box::new(MinimaxOracle::new(class.clone(), cs.clone(), &caps())),
        ];
        for o in oracles.iter_mut() {
            let trace = run_protocol(&cfg, &mut MonClausLearner::new(3), o.as_mut(), t).unwrap();
            assert!(trace.queries() <= 2);
            assert_eq!(trace.final_vs.singleton(), Some(t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_decision_lists_within_budget(seed in any::<u64>(), m in 1usize..=8) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let l = DecisionList::random(m, &mut rng);
        let k = blocks_of(&l).len().max(1);
        let trace = run_self_directed(&mut SdDecisionListLearner::new(m), &l.to_concept()).unwrap();
        prop_assert!(trace.mistakes <= 4 * k * m);
    }
}
