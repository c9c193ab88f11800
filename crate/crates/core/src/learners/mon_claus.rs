//! Two queries identify any monomial or clause under Hamming `CS_min`.
//!
//! Two simulations run side by side: one decodes a monomial from the
//! answers at `0^m` and `1^m`, the other decodes a clause by running the
//! same decoder on the dual answers (inputs complemented, labels negated).
//! A simulation is dropped once its candidate contradicts an answer.

use crate::domain::{Concept, VersionSpace};
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::protocol::{Contrast, Learner, OracleAnswer, Query};

use super::honest_min_answer;

#[derive(Clone, Debug)]
pub struct MonClausLearner {
    m: usize,
    answers: Vec<(usize, OracleAnswer)>,
    hypothesis: Option<Concept>,
}

impl MonClausLearner {
    pub fn new(m: usize) -> Self {
        MonClausLearner { m, answers: Vec::new(), hypothesis: None }
    }

    fn full(&self) -> usize {
        (1 << self.m) - 1
    }

    /// Positive and negative variable masks of the monomial consistent with
    /// the answers at `0^m` and `1^m`.
    fn decode_monomial(&self, at_zero: &OracleAnswer, at_one: &OracleAnswer) -> Option<(usize, usize)> {
        let full = self.full();
        let pos = match (at_zero.label, at_zero.contrast) {
            (true, _) => 0,
            (false, Contrast::Point { x, label: true }) => x,
            _ => return None,
        };
        let neg = match (at_one.label, at_one.contrast) {
            (true, _) => 0,
            (false, Contrast::Point { x, label: true }) => full & !x,
            _ => return None,
        };
        (pos & neg == 0).then_some((pos, neg))
    }

    fn dual(&self, query: usize, a: &OracleAnswer) -> (usize, OracleAnswer) {
        let full = self.full();
        let contrast = match a.contrast {
            Contrast::Omega => Contrast::Omega,
            Contrast::Point { x, label } => Contrast::Point { x: full ^ x, label: !label },
        };
        (full ^ query, OracleAnswer { label: !a.label, contrast })
    }

    fn consistent(&self, c: &Concept) -> bool {
        self.answers.iter().all(|(q, a)| honest_min_answer(c, &Metric::Hamming, *q, a))
    }

    fn decide(&mut self) -> Result<()> {
        let n = 1 << self.m;
        let full = self.full();
        if self.answers.len() == 1 {
            let (_, a) = self.answers[0];
            if a.contrast == Contrast::Omega {
                self.hypothesis = Some(Concept::from_fn(n, |_| a.label));
            }
            return Ok(());
        }
        let find = |q: usize| self.answers.iter().find(|(p, _)| *p == q).map(|(_, a)| *a);
        let (Some(zero), Some(one)) = (find(0), find(full)) else {
            return Ok(());
        };
        let mut candidates = Vec::new();
        if let Some((pos, neg)) = self.decode_monomial(&zero, &one) {
            candidates.push(Concept::from_fn(n, |x| x & pos == pos && x & neg == 0));
        }
        let (_, dual_zero) = self.dual(full, &one);
        let (_, dual_one) = self.dual(0, &zero);
        if let Some((pos, neg)) = self.decode_monomial(&dual_zero, &dual_one) {
            candidates.push(Concept::from_fn(n, |x| x & pos != 0 || x & neg != neg));
        }
        candidates.retain(|c| self.consistent(c));
        candidates.dedup();
        match candidates.len() {
            1 => {
                self.hypothesis = candidates.pop();
                Ok(())
            }
            0 => Err(Error::InconsistentOracle("no monomial or clause fits the answers".into())),
            _ => Err(Error::InconsistentOracle("both simulations stayed consistent".into())),
        }
    }
}

impl Learner for MonClausLearner {
    fn next_query(&mut self, _vs: &VersionSpace) -> Result<Option<Query>> {
        if self.hypothesis.is_some() {
            return Ok(None);
        }
        Ok(match self.answers.len() {
            0 => Some(Query::at(0)),
            1 => Some(Query::at(self.full())),
            _ => None,
        })
    }

    fn observe(&mut self, query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        self.answers.push((query.point, *answer));
        self.decide()
    }

    fn hypothesis(&self) -> Option<Concept> {
        self.hypothesis.clone()
    }
}
