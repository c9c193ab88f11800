//! Verification suites: exact values and learner runs checked against the
//! stated inequalities on fixed and seeded random classes.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::classes::{
    blocks_of, dl_lists, gen_dl, gen_mdnf, gen_monclaus, gen_parity, gen_pmon, gen_primed_pmon, gen_singletons, vcd1_example,
    DecisionList, Literal,
};
use crate::domain::{Concept, ConceptClass, FiniteDomain, VersionSpace};
use crate::error::Result;
use crate::exact::{
    exact_contrast_complexity, exact_ex_mq_complexity, exact_mq_complexity, exact_sd_complexity, vcd, Value,
};
use crate::learners::{
    run_self_directed, vcd1_metric, worst_case_queries, MdnfDynamicLearner, PmonLearner, SdDecisionListLearner,
    SdFromContrast, SdMdnfLearner, Vcd1Learner,
};
use crate::metrics::{hamming, spectrum_size, vs_distance, DistanceMatrix, Metric};
use crate::oracles::{CsMin, CsProx};
use crate::protocol::{ContrastSet, CsContext, ProtocolConfig, Query};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome { name: name.into(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const SUITES: &[&str] = &["sandwich", "discrete", "dominance", "sd_bound", "chain", "dl", "dl2", "mdnf", "vcd1"];

/// Run one suite, or every suite for `all`. `slow` adds the full
/// `gen_dl(4, 2)` search to `dl2`.
pub fn run_suite(name: &str, trials: usize, seed: u64, caps: &Caps, slow: bool) -> Result<Vec<SuiteOutcome>> {
    Ok(match name {
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, trials, seed, caps, slow)?);
            }
            out
        }
        "dl2" => vec![suite_dl2(caps, slow)?],
        "sandwich" => vec![suite_sandwich(trials, seed, caps)?],
        "discrete" => vec![suite_discrete(trials, seed, caps)?],
        "dominance" => vec![suite_dominance(trials, seed, caps)?],
        "sd_bound" => vec![suite_sd_bound(trials, seed, caps)?],
        "chain" => vec![suite_chain(trials.max(1) * 10, seed, caps)?],
        "dl" => vec![suite_dl(trials.max(1) * 2, seed)?],
        "mdnf" => vec![suite_mdnf(caps)?],
        "vcd1" => vec![suite_vcd1(trials.max(1) / 2, seed, caps)?],
        other => {
            return Err(crate::Error::InvalidParameter(format!(
                "unknown suite {:?}; known: all, {}",
                other,
                SUITES.join(", ")
            )))
        }
    })
}

/// Random class over `2..=max_n` instances with `2..=max_c` distinct concepts.
pub fn random_class(rng: &mut impl Rng, max_n: usize, max_c: usize) -> ConceptClass {
    let n = rng.gen_range(2..=max_n);
    let total = 1usize << n;
    let size = rng.gen_range(2..=max_c.min(total));
    let mut codes: Vec<usize> = (0..total).collect();
    codes.shuffle(rng);
    let concepts = codes[..size].iter().map(|&code| Concept::from_fn(n, |x| code >> x & 1 == 1)).collect();
    ConceptClass::new(FiniteDomain::new(n), concepts).expect("distinct concepts")
}

/// Five distance functions on `n` instances: Hamming distance of the
/// binary codes of the indices, distance on a line, and three random
/// symmetric matrices.
pub fn metric_pool(n: usize, rng: &mut impl Rng) -> Vec<(String, Metric)> {
    let mut pool = vec![
        (
            "hamming-codes".to_string(),
            Metric::matrix(
                DistanceMatrix::from_fn(n, |x, y| crate::Rational::from_integer(hamming(x, y) as i64))
                    .expect("valid matrix"),
            ),
        ),
        ("line".to_string(), Metric::GridL1 { dims: vec![n] }),
    ];
    for i in 0..3 {
        pool.push((format!("random{}", i), Metric::matrix(DistanceMatrix::random(n, 4, rng))));
    }
    pool
}

pub fn random_sequence(n: usize, len: usize, rng: &mut impl Rng) -> Metric {
    Metric::Sequence(Arc::new((0..len).map(|_| DistanceMatrix::random(n, 4, rng)).collect()))
}

fn min_value(class: &Arc<ConceptClass>, metric: Metric, caps: &Caps) -> Result<Value> {
    Ok(exact_contrast_complexity(class.clone(), Arc::new(CsMin::new(metric)), caps)?.value)
}

fn ceil_log2(v: usize) -> u32 {
    if v <= 1 {
        0
    } else {
        usize::BITS - (v - 1).leading_zeros()
    }
}

/// Proximity queries needed per minimum-distance query: a binary search
/// over the `s_d` candidate radii plus the outcome "no opposite point",
/// ending with a query at the found radius.
pub fn prox_factor(spectrum_size: usize) -> u32 {
    ceil_log2(spectrum_size + 1)
}

/// `CS_min <= CS_prox <= MQ`, and `CS_prox <= ceil(log2(s_d + 1)) * CS_min`.
pub fn suite_sandwich(trials: usize, seed: u64, caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("sandwich");
    let mut classes: Vec<(String, Arc<ConceptClass>, Metric)> = Vec::new();
    for m in 2..=3 {
        classes.push((format!("pmon:m={}", m), Arc::new(gen_pmon(m, caps)?), Metric::Hamming));
        classes.push((format!("parity:m={}", m), Arc::new(gen_parity(m, caps)?), Metric::Hamming));
        classes.push((format!("monclaus:m={}", m), Arc::new(gen_monclaus(m, caps)?), Metric::Hamming));
    }
    classes.push(("primed_pmon:m=2".into(), Arc::new(gen_primed_pmon(2, caps)?), Metric::Hamming));
    classes.push(("mdnf:m=3,s=2,z=2".into(), Arc::new(gen_mdnf(3, 2, 2, caps)?), Metric::Hamming));
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for t in 0..trials {
        let class = Arc::new(random_class(&mut rng, 5, 8));
        let pool = metric_pool(class.n(), &mut rng);
        let (name, metric) = pool[t % pool.len()].clone();
        classes.push((format!("random#{} {}", t, name), class, metric));
    }
    for (name, class, metric) in classes {
        let min = min_value(&class, metric.clone(), caps)?;
        let prox = exact_contrast_complexity(class.clone(), Arc::new(CsProx::new(metric.clone())?), caps)?.value;
        let mq = exact_mq_complexity(class.clone(), caps)?.value;
        out.check(min <= prox && prox <= mq, || format!("{}: min={} prox={} mq={}", name, min, prox, mq));
        let factor = prox_factor(spectrum_size(&metric, class.n()));
        if let Value::Finite(v) = min {
            let bound = Value::Finite(factor * v);
            out.check(prox <= bound, || format!("{}: prox={} exceeds {}*{}", name, prox, factor, v));
        }
    }
    Ok(out)
}

/// `EX+MQ - 2 <= CS_min(d0) <= EX+MQ` on random classes, plus the
/// singleton class on four instances.
pub fn suite_discrete(trials: usize, seed: u64, caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("discrete");
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for t in 0..trials {
        let class = Arc::new(random_class(&mut rng, 5, 8));
        let d0 = min_value(&class, Metric::Discrete, caps)?;
        let ex = exact_ex_mq_complexity(class.clone(), caps)?.value;
        let (Some(d0v), Some(exv)) = (d0.finite(), ex.finite()) else {
            out.check(false, || format!("random#{}: unbounded value d0={} exmq={}", t, d0, ex));
            continue;
        };
        out.check(exv <= d0v + 2 && d0v <= exv, || format!("random#{}: d0={} exmq={}", t, d0v, exv));
    }
    let singletons = Arc::new(gen_singletons(4, caps)?);
    let d0 = min_value(&singletons, Metric::Discrete, caps)?;
    let mq = exact_mq_complexity(singletons, caps)?.value;
    out.check(d0 == Value::Finite(1) && mq == Value::Finite(3), || format!("singletons:n=4 d0={} mq={}", d0, mq));
    Ok(out)
}

/// Singleton sub-rule of a contrast set: only its smallest admissible
/// instance.
pub struct FirstOf(pub Arc<dyn ContrastSet>);

impl ContrastSet for FirstOf {
    fn name(&self) -> String {
        format!("first-of({})", self.0.name())
    }

    fn contrast_set(&self, query: &Query, ctx: &CsContext) -> Vec<usize> {
        self.0.contrast_set(query, ctx).into_iter().take(1).collect()
    }

    fn depends_on_vs(&self) -> bool {
        self.0.depends_on_vs()
    }

    fn depends_on_round(&self) -> bool {
        self.0.depends_on_round()
    }
}

/// Dominance of contrast sets: `CS_min(d) <= CS_min(d0)` for every metric
/// of the pool, and the singleton sub-rule never exceeds its parent.
pub fn suite_dominance(trials: usize, seed: u64, caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("dominance");
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for t in 0..trials {
        let class = Arc::new(random_class(&mut rng, 5, 8));
        let d0 = min_value(&class, Metric::Discrete, caps)?;
        for (name, metric) in metric_pool(class.n(), &mut rng) {
            let parent: Arc<dyn ContrastSet> = Arc::new(CsMin::new(metric));
            let v = exact_contrast_complexity(class.clone(), parent.clone(), caps)?.value;
            out.check(v <= d0, || format!("random#{} {}: min={} d0={}", t, name, v, d0));
            let sub = exact_contrast_complexity(class.clone(), Arc::new(FirstOf(parent)), caps)?.value;
            out.check(sub <= v, || format!("random#{} {}: first-of={} min={}", t, name, sub, v));
        }
    }
    Ok(out)
}

/// `CS_min(d) >= ceil(SD / 2)` for the metric pool and for three seeded
/// round-dependent metric sequences, and the self-directed simulation of
/// the single-query pmon learner.
pub fn suite_sd_bound(trials: usize, seed: u64, caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("sd_bound");
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for t in 0..trials {
        let class = Arc::new(random_class(&mut rng, 5, 8));
        let sd = exact_sd_complexity(class.clone(), caps)?.value.finite().unwrap_or(0);
        let need = Value::Finite(sd.div_ceil(2));
        let mut metrics = metric_pool(class.n(), &mut rng);
        if t < 3 {
            metrics.push((format!("sequence{}", t), random_sequence(class.n(), 3, &mut rng)));
        }
        for (name, metric) in metrics {
            let v = min_value(&class, metric, caps)?;
            out.check(v >= need, || format!("random#{} {}: min={} sd={}", t, name, v, sd));
        }
    }
    let pmon = Arc::new(gen_pmon(3, caps)?);
    for target in 0..pmon.len() {
        let mut learner = SdFromContrast::new(PmonLearner::new(3), pmon.clone(), Metric::Hamming)?;
        let run = run_self_directed(&mut learner, pmon.concept(target))?;
        let bound = 2 * learner.inner_queries();
        out.check(run.mistakes <= 2 && run.mistakes <= bound, || {
            format!("pmon:m=3 target {}: {} mistakes for {} inner queries", target, run.mistakes, learner.inner_queries())
        });
    }
    Ok(out)
}

/// `vs_distance(vs, a, b) <= vs_distance(vs, a, c)` for chains `a <= b <= c`
/// and random version spaces of `gen_mdnf(4, 2, 2)`.
pub fn suite_chain(chains: usize, seed: u64, caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("chain");
    let class = Arc::new(gen_mdnf(4, 2, 2, caps)?);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..chains {
        let c: usize = rng.gen_range(0..16);
        let b = c & rng.gen_range(0..16usize);
        let a = b & rng.gen_range(0..16usize);
        let full = VersionSpace::full(class.clone());
        let keep: Vec<bool> = (0..class.len()).map(|_| rng.gen_bool(0.5)).collect();
        let mut vs = full.retain(|i| keep[i]);
        if vs.is_empty() {
            vs = full;
        }
        let (ab, ac) = (vs_distance(&vs, a, b), vs_distance(&vs, a, c));
        out.check(ab <= ac, || format!("a={:04b} b={:04b} c={:04b}: {} > {}", a, b, c, ab, ac));
    }
    Ok(out)
}

/// At most `4 k m` mistakes of the blockwise learner, `k` the block count
/// (at least 1), on random decision lists with `m <= 8`.
pub fn suite_dl(lists: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("dl");
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..lists {
        let m = rng.gen_range(1..=8);
        let list = DecisionList::random(m, &mut rng);
        let k = blocks_of(&list).len().max(1);
        let run = run_self_directed(&mut SdDecisionListLearner::new(m), &list.to_concept())?;
        out.check(run.mistakes <= 4 * k * m, || format!("{}: {} mistakes > 4*{}*{}", list, run.mistakes, k, m));
    }
    Ok(out)
}

/// Lists `[(v_m, 1), (v_{m-1}, 0), L']` for every 1-alternation list `L'`
/// over `v_1..v_{m-2}`.
pub fn dl2_embedding(m: usize, caps: &Caps) -> Result<ConceptClass> {
    if m < 3 {
        return Err(crate::Error::InvalidParameter(format!("dl2 embedding needs m >= 3, got {}", m)));
    }
    let head = [(Literal { var: m - 1, positive: true }, true), (Literal { var: m - 2, positive: true }, false)];
    let mut items = Vec::new();
    for inner in dl_lists(m - 2, 1, caps)? {
        let mut list_items = head.to_vec();
        list_items.extend(inner.items.iter().copied());
        let list = DecisionList::new(m, list_items, inner.default)?;
        items.push((list.to_concept(), list.to_string()));
    }
    ConceptClass::dedup(FiniteDomain::cube(m), items)
}

/// The embedded construction needs at least as many contrastive queries
/// as membership queries for `DL^1_{m-2}`, at `m = 3, 4`.
pub fn suite_dl2(caps: &Caps, slow: bool) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("dl2");
    for m in 3..=4 {
        let sub = Arc::new(dl2_embedding(m, caps)?);
        let v = min_value(&sub, Metric::Hamming, caps)?;
        let inner = exact_mq_complexity(Arc::new(gen_dl(m - 2, 1, caps)?), caps)?.value;
        out.check(v >= inner, || format!("m={}: embedded min={} inner mq={}", m, v, inner));
    }
    if slow {
        let full = Arc::new(gen_dl(4, 2, caps)?);
        let v = min_value(&full, Metric::Hamming, caps)?;
        out.check(v >= Value::Finite(3), || format!("gen_dl(4,2): min={}", v));
    }
    Ok(out)
}

/// Weight-ordered self-directed learner and the version-space distance
/// learner stay within `s` on monotone DNF classes.
pub fn suite_mdnf(caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("mdnf");
    for (m, s, z) in [(3, 2, 2), (4, 2, 1)] {
        let class = Arc::new(gen_mdnf(m, s, z, caps)?);
        for t in 0..class.len() {
            let run = run_self_directed(&mut SdMdnfLearner::new(m), class.concept(t))?;
            out.check(run.mistakes <= s, || format!("mdnf({},{},{}) target {}: {} mistakes", m, s, z, t, run.mistakes));
        }
        let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(Metric::VersionSpaceInduced)));
        let worst = worst_case_queries(&cfg, &MdnfDynamicLearner::new(m, s), 0..class.len())?;
        out.check(worst.is_some_and(|w| w <= s), || format!("mdnf({},{},{}): dynamic learner worst {:?}", m, s, z, worst));
    }
    let sd = exact_sd_complexity(Arc::new(gen_mdnf(3, 2, 2, caps)?), caps)?.value;
    out.check(sd == Value::Finite(2), || format!("exact SD of mdnf(3,2,2) = {}", sd));
    Ok(out)
}

/// Random class with VC dimension exactly 1 on `2..=max_n` instances.
pub fn random_vcd1_class(rng: &mut impl Rng, max_n: usize) -> ConceptClass {
    loop {
        let n = rng.gen_range(2..=max_n);
        let mut codes: Vec<usize> = (0..1usize << n).collect();
        codes.shuffle(rng);
        let target = rng.gen_range(2..=n + 1);
        let mut chosen: Vec<Concept> = Vec::new();
        for code in codes {
            let c = Concept::from_fn(n, |x| code >> x & 1 == 1);
            chosen.push(c);
            let class = ConceptClass::new(FiniteDomain::new(n), chosen.clone()).expect("distinct");
            if vcd(&class) > 1 {
                chosen.pop();
            }
            if chosen.len() == target {
                break;
            }
        }
        let class = ConceptClass::new(FiniteDomain::new(n), chosen).expect("distinct");
        if vcd(&class) == 1 {
            return class;
        }
    }
}

/// The VC-1 example needs two queries under every pool metric, and the
/// constructed metric lets the two-query learner identify every target of
/// VC-1 classes.
pub fn suite_vcd1(random: usize, seed: u64, caps: &Caps) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("vcd1");
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let example = Arc::new(vcd1_example());
    let sd = exact_sd_complexity(example.clone(), caps)?.value;
    out.check(sd == Value::Finite(1) && vcd(&example) == 1, || format!("vcd1_example: SD={} VCD={}", sd, vcd(&example)));
    let mut pool = metric_pool(example.n(), &mut rng);
    pool.push(("discrete".into(), Metric::Discrete));
    for (name, metric) in pool {
        let v = min_value(&example, metric, caps)?;
        out.check(v >= Value::Finite(2), || format!("vcd1_example {}: min={}", name, v));
    }
    let mut classes = vec![("vcd1_example".to_string(), example)];
    for n in 2..=6 {
        classes.push((format!("singletons:n={}", n), Arc::new(gen_singletons(n, caps)?)));
    }
    for i in 0..random {
        classes.push((format!("random-vcd1#{}", i), Arc::new(random_vcd1_class(&mut rng, 6))));
    }
    for (name, class) in classes {
        let cons = Arc::new(vcd1_metric(&class)?);
        let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(cons.metric.clone())));
        let worst = worst_case_queries(&cfg, &Vcd1Learner::new(cons), 0..class.len())?;
        out.check(worst.is_some_and(|w| w <= 2), || format!("{}: vcd1 learner worst {:?}", name, worst));
    }
    Ok(out)
}
