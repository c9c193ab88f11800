//! Learning with positive examples, negative examples and membership
//! queries, and the two transformers between that model and the
//! contrastive model under the discrete metric.

use std::sync::{Arc, Mutex};

use crate::domain::{ConceptClass, VersionSpace};
use crate::error::{Error, Result};
use crate::exact::{ExMqGame, ExMqMove, Solver};
use crate::metrics::Metric;
use crate::oracles::CsMin;
use crate::protocol::{restrict_version_space, Contrast, Learner, OracleAnswer, Query};

/// Reply to an [`ExMqMove`]: a label for membership queries, an example
/// (or the dummy `None`) for example queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExMqAnswer {
    Label(bool),
    Example(Option<usize>),
}

pub trait ExMqLearner {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<ExMqMove>>;
    fn observe(&mut self, mv: &ExMqMove, answer: &ExMqAnswer, vs: &VersionSpace) -> Result<()>;
}

pub fn restrict_ex_mq(vs: &VersionSpace, mv: &ExMqMove, answer: &ExMqAnswer) -> VersionSpace {
    let class = vs.class().clone();
    vs.retain(|c| {
        let concept = class.concept(c);
        match (mv, answer) {
            (ExMqMove::Member(x), ExMqAnswer::Label(b)) => concept.label(*x) == *b,
            (ExMqMove::Positive, ExMqAnswer::Example(Some(p))) => concept.label(*p),
            (ExMqMove::Positive, ExMqAnswer::Example(None)) => concept.constant_value() == Some(false),
            (ExMqMove::Negative, ExMqAnswer::Example(Some(p))) => !concept.label(*p),
            (ExMqMove::Negative, ExMqAnswer::Example(None)) => concept.constant_value() == Some(true),
            _ => false,
        }
    })
}

/// Run an examples-plus-membership learner until the target is identified.
/// `pick` chooses among the target's instances with the requested label.
/// Returns the number of calls.
pub fn run_ex_mq(
    class: Arc<ConceptClass>,
    learner: &mut dyn ExMqLearner,
    target: usize,
    pick: &mut dyn FnMut(&[usize]) -> usize,
) -> Result<usize> {
    let concept = class.concept(target).clone();
    let limit = class.len() * class.n().max(1) + 2;
    let mut vs = VersionSpace::full(class.clone());
    let mut calls = 0;
    while vs.len() > 1 {
        if calls >= limit {
            return Err(Error::RoundLimit(limit));
        }
        let Some(mv) = learner.next_query(&vs)? else {
            return Err(Error::InconsistentOracle("learner stopped before identification".into()));
        };
        let answer = match mv {
            ExMqMove::Member(x) => ExMqAnswer::Label(concept.label(x)),
            ExMqMove::Positive | ExMqMove::Negative => {
                let want = matches!(mv, ExMqMove::Positive);
                let pool: Vec<usize> = (0..class.n()).filter(|&x| concept.label(x) == want).collect();
                ExMqAnswer::Example(if pool.is_empty() { None } else { Some(pool[pick(&pool) % pool.len()]) })
            }
        };
        vs = restrict_ex_mq(&vs, &mv, &answer);
        calls += 1;
        learner.observe(&mv, &answer, &vs)?;
    }
    Ok(calls)
}

/// Plays the optimal moves stored by an exact [`ExMqGame`] search.
#[derive(Clone)]
pub struct ExMqCertificateLearner {
    solver: Arc<Mutex<Solver<ExMqGame>>>,
}

impl ExMqCertificateLearner {
    pub fn new(solver: Arc<Mutex<Solver<ExMqGame>>>) -> Self {
        ExMqCertificateLearner { solver }
    }
}

impl ExMqLearner for ExMqCertificateLearner {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<ExMqMove>> {
        self.solver.lock().expect("solver lock").best_move(vs.mask(), 0)
    }

    fn observe(&mut self, _mv: &ExMqMove, _answer: &ExMqAnswer, _vs: &VersionSpace) -> Result<()> {
        Ok(())
    }
}

/// Contrastive learner under the discrete metric built from an
/// examples-plus-membership learner, with the same number of queries.
/// Example requests query instance 0: its label or its contrastive example
/// supplies an instance with the requested label.
#[derive(Clone)]
pub struct ContrastFromExMq<L> {
    inner: L,
    inner_vs: VersionSpace,
    pending: Option<ExMqMove>,
}

impl<L: ExMqLearner> ContrastFromExMq<L> {
    pub fn new(inner: L, class: Arc<ConceptClass>) -> Self {
        ContrastFromExMq { inner, inner_vs: VersionSpace::full(class), pending: None }
    }
}

impl<L: ExMqLearner> Learner for ContrastFromExMq<L> {
    fn next_query(&mut self, _vs: &VersionSpace) -> Result<Option<Query>> {
        let Some(mv) = self.inner.next_query(&self.inner_vs)? else {
            return Ok(None);
        };
        self.pending = Some(mv);
        Ok(Some(match mv {
            ExMqMove::Member(x) => Query::at(x),
            ExMqMove::Positive | ExMqMove::Negative => Query::at(0),
        }))
    }

    fn observe(&mut self, query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        let mv = self.pending.take().ok_or_else(|| Error::InconsistentOracle("answer without a query".into()))?;
        let translated = match mv {
            ExMqMove::Member(_) => ExMqAnswer::Label(answer.label),
            ExMqMove::Positive | ExMqMove::Negative => {
                let want = matches!(mv, ExMqMove::Positive);
                if answer.label == want {
                    ExMqAnswer::Example(Some(query.point))
                } else {
                    match answer.contrast {
                        Contrast::Point { x, .. } => ExMqAnswer::Example(Some(x)),
                        Contrast::Omega => ExMqAnswer::Example(None),
                    }
                }
            }
        };
        self.inner_vs = restrict_ex_mq(&self.inner_vs, &mv, &translated);
        self.inner.observe(&mv, &translated, &self.inner_vs)
    }
}

/// Examples-plus-membership learner built from a contrastive learner under
/// the discrete metric: one negative and one positive example up front,
/// then one membership query per contrastive query.
#[derive(Clone)]
pub struct ExMqFromContrast<L> {
    inner: L,
    cs: Arc<CsMin>,
    inner_vs: VersionSpace,
    inner_round: usize,
    negative: Option<Option<usize>>,
    positive: Option<Option<usize>>,
}

impl<L: Learner> ExMqFromContrast<L> {
    pub fn new(inner: L, class: Arc<ConceptClass>) -> Self {
        ExMqFromContrast {
            inner,
            cs: Arc::new(CsMin::new(Metric::Discrete)),
            inner_vs: VersionSpace::full(class),
            inner_round: 0,
            negative: None,
            positive: None,
        }
    }
}

impl<L: Learner> ExMqLearner for ExMqFromContrast<L> {
    fn next_query(&mut self, _vs: &VersionSpace) -> Result<Option<ExMqMove>> {
        if self.negative.is_none() {
            return Ok(Some(ExMqMove::Negative));
        }
        if self.positive.is_none() {
            return Ok(Some(ExMqMove::Positive));
        }
        Ok(self.inner.next_query(&self.inner_vs)?.map(|q| ExMqMove::Member(q.point)))
    }

    fn observe(&mut self, mv: &ExMqMove, answer: &ExMqAnswer, _vs: &VersionSpace) -> Result<()> {
        match (mv, answer) {
            (ExMqMove::Negative, ExMqAnswer::Example(e)) => self.negative = Some(*e),
            (ExMqMove::Positive, ExMqAnswer::Example(e)) => self.positive = Some(*e),
            (ExMqMove::Member(x), ExMqAnswer::Label(b)) => {
                let other = if *b { self.negative } else { self.positive }.flatten();
                let reply = match other {
                    Some(p) => OracleAnswer::point(*b, p, !*b),
                    None => OracleAnswer::omega(*b),
                };
                let q = Query::at(*x);
                self.inner_vs = restrict_version_space(&self.inner_vs, &q, &reply, self.cs.as_ref(), self.inner_round);
                self.inner_round += 1;
                self.inner.observe(&q, &reply, &self.inner_vs)?;
            }
            _ => return Err(Error::InconsistentOracle("answer does not match the query kind".into())),
        }
        Ok(())
    }
}
