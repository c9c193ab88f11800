//! Self-directed learning: the learner picks every instance in turn,
//! predicts its label and is charged for each wrong prediction.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::domain::{cube_bit, Concept, ConceptClass, VersionSpace};
use crate::error::{Error, Result};
use crate::exact::SdSolver;
use crate::metrics::{Metric, MetricEnv};
use crate::oracles::CsMin;
use crate::protocol::{restrict_version_space, Learner, OracleAnswer, Query};

pub trait SelfDirectedLearner {
    /// The next unlabelled instance and the predicted label, or `None` once
    /// every instance is labelled.
    fn next(&mut self) -> Result<Option<(usize, bool)>>;
    fn feedback(&mut self, x: usize, label: bool);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdStep {
    pub x: usize,
    pub predicted: bool,
    pub actual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdTrace {
    pub steps: Vec<SdStep>,
    pub mistakes: usize,
}

impl SdTrace {
    pub fn mistake_points(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| s.predicted != s.actual).map(|s| s.x).collect()
    }
}

pub fn run_self_directed(learner: &mut dyn SelfDirectedLearner, target: &Concept) -> Result<SdTrace> {
    let n = target.len();
    let mut seen = vec![false; n];
    let mut trace = SdTrace { steps: Vec::with_capacity(n), mistakes: 0 };
    while let Some((x, predicted)) = learner.next()? {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidParameter(format!("instance {} selected twice or out of range", x)));
        }
        let actual = target.label(x);
        trace.mistakes += (predicted != actual) as usize;
        trace.steps.push(SdStep { x, predicted, actual });
        learner.feedback(x, actual);
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidParameter(format!("instance {} never labelled", x)));
    }
    Ok(trace)
}

#[derive(Clone, Debug)]
enum Phase {
    Idle,
    Asked(usize),
    Scan { query: usize, label: bool, order: Vec<usize>, pos: usize },
    Finish,
}

/// Self-directed learner driven by a minimum-distance learner. Each inner
/// query is predicted 0; then instances are predicted with the query's
/// label in order of distance until the first mistake, which becomes the
/// contrastive example.
#[derive(Clone)]
pub struct SdFromContrast<L> {
    inner: L,
    class: Arc<ConceptClass>,
    cs: Arc<CsMin>,
    inner_vs: VersionSpace,
    inner_round: usize,
    inner_queries: usize,
    known: Vec<Option<bool>>,
    phase: Phase,
}

impl<L: Learner> SdFromContrast<L> {
    pub fn new(inner: L, class: Arc<ConceptClass>, metric: Metric) -> Result<Self> {
        metric.check_domain(class.n())?;
        let n = class.n();
        Ok(SdFromContrast {
            inner,
            inner_vs: VersionSpace::full(class.clone()),
            class,
            cs: Arc::new(CsMin::new(metric)),
            inner_round: 0,
            inner_queries: 0,
            known: vec![None; n],
            phase: Phase::Idle,
        })
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }

    pub fn inner_queries(&self) -> usize {
        self.inner_queries
    }

    fn scan_order(&self, query: usize) -> Vec<usize> {
        let env = MetricEnv { vs: Some(&self.inner_vs), round: self.inner_round };
        let metric = self.cs.metric();
        let mut order: Vec<usize> = (0..self.class.n()).filter(|&z| z != query).collect();
        order.sort_by_cached_key(|&z| (metric.distance(query, z, &env), z));
        order
    }

    fn deliver(&mut self, query: usize, answer: OracleAnswer) -> Result<()> {
        let q = Query::at(query);
        self.inner_vs = restrict_version_space(&self.inner_vs, &q, &answer, self.cs.as_ref(), self.inner_round);
        self.inner_round += 1;
        self.phase = Phase::Idle;
        self.inner.observe(&q, &answer, &self.inner_vs)
    }

    fn finish_prediction(&self, x: usize) -> bool {
        if let Some(c) = self.inner_vs.singleton() {
            return self.class.concept(c).label(x);
        }
        self.inner.hypothesis().map_or(false, |h| h.label(x))
    }
}

impl<L: Learner> SelfDirectedLearner for SdFromContrast<L> {
    fn next(&mut self) -> Result<Option<(usize, bool)>> {
        loop {
            match &mut self.phase {
                Phase::Idle => {
                    if self.inner_vs.len() <= 1 {
                        self.phase = Phase::Finish;
                        continue;
                    }
                    match self.inner.next_query(&self.inner_vs)? {
                        None => self.phase = Phase::Finish,
                        Some(q) => {
                            self.inner_queries += 1;
                            match self.known[q.point] {
                                None => {
                                    self.phase = Phase::Asked(q.point);
                                    return Ok(Some((q.point, false)));
                                }
                                Some(label) => {
                                    let order = self.scan_order(q.point);
                                    self.phase = Phase::Scan { query: q.point, label, order, pos: 0 };
                                }
                            }
                        }
                    }
                }
                Phase::Asked(x) => {
                    return Err(Error::InvalidParameter(format!("no feedback for instance {}", x)));
                }
                Phase::Scan { query, label, order, pos } => {
                    let (query, label) = (*query, *label);
                    while *pos < order.len() {
                        let z = order[*pos];
                        match self.known[z] {
                            None => return Ok(Some((z, label))),
                            Some(l) if l == label => *pos += 1,
                            Some(_) => {
                                self.deliver(query, OracleAnswer::point(label, z, !label))?;
                                break;
                            }
                        }
                    }
                    if matches!(self.phase, Phase::Scan { .. }) {
                        self.deliver(query, OracleAnswer::omega(label))?;
                    }
                }
                Phase::Finish => {
                    return Ok(self
                        .known
                        .iter()
                        .position(|k| k.is_none())
                        .map(|x| (x, self.finish_prediction(x))));
                }
            }
        }
    }

    fn feedback(&mut self, x: usize, label: bool) {
        self.known[x] = Some(label);
        if let Phase::Asked(q) = self.phase {
            if q == x {
                let order = self.scan_order(q);
                self.phase = Phase::Scan { query: q, label, order, pos: 0 };
            }
        }
    }
}

/// Plays the optimal predictions stored by an exact [`SdSolver`].
#[derive(Clone)]
pub struct SdCertificateLearner {
    solver: Arc<Mutex<SdSolver>>,
    vs: VersionSpace,
    known: Vec<bool>,
}

impl SdCertificateLearner {
    pub fn new(solver: Arc<Mutex<SdSolver>>) -> Self {
        let class = solver.lock().expect("solver lock").class().clone();
        let n = class.n();
        SdCertificateLearner { solver, vs: VersionSpace::full(class), known: vec![false; n] }
    }
}

impl SelfDirectedLearner for SdCertificateLearner {
    fn next(&mut self) -> Result<Option<(usize, bool)>> {
        if self.vs.len() > 1 {
            if let Some(mv) = self.solver.lock().expect("solver lock").best_move(self.vs.mask())? {
                return Ok(Some(mv));
            }
        }
        let class = self.vs.class();
        let guess = self.vs.members().next().map(|c| class.concept(c));
        Ok(self.known.iter().position(|k| !k).map(|x| (x, guess.map_or(false, |c| c.label(x)))))
    }

    fn feedback(&mut self, x: usize, label: bool) {
        self.known[x] = true;
        let class = self.vs.class().clone();
        self.vs = self.vs.retain(|c| class.concept(c).label(x) == label);
    }
}

/// Blockwise purity testing for 1-decision lists. Each round tests every
/// literal over the free variables of the current subcube: the first
/// unlabelled point of the literal's region is predicted 0 (or the label
/// already seen there), the rest with the first label seen, and the test
/// fails on the first disagreement. Pure literals are then fixed to false.
#[derive(Clone, Debug)]
pub struct SdDecisionListLearner {
    m: usize,
    known: Vec<Option<bool>>,
    fixed: Vec<Option<bool>>,
    empty: bool,
    round: Option<Round>,
    rounds: usize,
}

#[derive(Clone, Debug)]
struct Round {
    literals: Vec<(usize, bool)>,
    cursor: usize,
    pure: Vec<(usize, bool)>,
}

impl SdDecisionListLearner {
    pub fn new(m: usize) -> Self {
        SdDecisionListLearner { m, known: vec![None; 1 << m], fixed: vec![None; m], empty: false, round: None, rounds: 0 }
    }

    /// Rounds of purity tests started so far.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    fn in_subcube(&self, x: usize) -> bool {
        !self.empty && self.fixed.iter().enumerate().all(|(i, f)| f.map_or(true, |v| cube_bit(x, i, self.m) == v))
    }

    fn region(&self, var: usize, value: bool) -> impl Iterator<Item = usize> + '_ {
        (0..self.known.len()).filter(move |&x| self.in_subcube(x) && cube_bit(x, var, self.m) == value)
    }

    fn first_unknown(&self) -> Option<usize> {
        self.known.iter().position(|k| k.is_none())
    }
}

impl SelfDirectedLearner for SdDecisionListLearner {
    fn next(&mut self) -> Result<Option<(usize, bool)>> {
        loop {
            let Some(unknown) = self.first_unknown() else {
                return Ok(None);
            };
            let Some(round) = &mut self.round else {
                let free: Vec<usize> = (0..self.m).filter(|&i| self.fixed[i].is_none()).collect();
                if self.empty || free.is_empty() {
                    return Ok(Some((unknown, false)));
                }
                let literals = free.iter().flat_map(|&i| [(i, true), (i, false)]).collect();
                self.round = Some(Round { literals, cursor: 0, pure: Vec::new() });
                self.rounds += 1;
                continue;
            };
            if round.cursor == round.literals.len() {
                let pure = std::mem::take(&mut round.pure);
                self.round = None;
                if pure.is_empty() {
                    return Ok(Some((unknown, false)));
                }
                for (var, value) in pure {
                    match self.fixed[var] {
                        Some(v) if v == value => self.empty = true,
                        _ => self.fixed[var] = Some(!value),
                    }
                }
                continue;
            }
            let (var, value) = round.literals[round.cursor];
            let mut seen: Option<bool> = None;
            let mut mixed = false;
            let mut open = None;
            for x in self.region(var, value) {
                match self.known[x] {
                    Some(l) => match seen {
                        None => seen = Some(l),
                        Some(s) if s != l => mixed = true,
                        _ => {}
                    },
                    None => {
                        if open.is_none() {
                            open = Some(x);
                        }
                    }
                }
            }
            let round = self.round.as_mut().expect("round in progress");
            if mixed {
                round.cursor += 1;
                continue;
            }
            match open {
                Some(x) => return Ok(Some((x, seen.unwrap_or(false)))),
                None => {
                    round.pure.push((var, value));
                    round.cursor += 1;
                }
            }
        }
    }

    fn feedback(&mut self, x: usize, label: bool) {
        self.known[x] = Some(label);
    }
}

/// Weight-ordered pass for monotone DNF: predicts the disjunction of the
/// terms found so far, and every false negative is a new minimal term.
#[derive(Clone, Debug)]
pub struct SdMdnfLearner {
    order: Vec<usize>,
    pos: usize,
    terms: Vec<usize>,
}

impl SdMdnfLearner {
    pub fn new(m: usize) -> Self {
        let mut order: Vec<usize> = (0..1usize << m).collect();
        order.sort_by_key(|&x| (x.count_ones(), x));
        SdMdnfLearner { order, pos: 0, terms: Vec::new() }
    }

    /// Terms as bit masks over cube indices.
    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    fn predict(&self, x: usize) -> bool {
        self.terms.iter().any(|&t| x & t == t)
    }
}

impl SelfDirectedLearner for SdMdnfLearner {
    fn next(&mut self) -> Result<Option<(usize, bool)>> {
        Ok(self.order.get(self.pos).map(|&x| (x, self.predict(x))))
    }

    fn feedback(&mut self, x: usize, label: bool) {
        self.pos += 1;
        if label && !self.predict(x) {
            self.terms.push(x);
        }
    }
}
