//! Learner for monotone DNF under the version-space-induced distance:
//! query `0^m` until the version space is a single concept. Each positive
//! contrastive example is a term of the target.

use crate::classes::MdnfFormula;
use crate::domain::{Concept, VersionSpace};
use crate::error::{Error, Result};
use crate::protocol::{Contrast, Learner, OracleAnswer, Query};

#[derive(Clone, Debug)]
pub struct MdnfDynamicLearner {
    m: usize,
    s: usize,
    terms: Vec<usize>,
    asked: usize,
}

impl MdnfDynamicLearner {
    pub fn new(m: usize, s: usize) -> Self {
        MdnfDynamicLearner { m, s, terms: Vec::new(), asked: 0 }
    }

    pub fn terms(&self) -> &[usize] {
        &self.terms
    }
}

impl Learner for MdnfDynamicLearner {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>> {
        if vs.len() <= 1 || self.asked >= self.s {
            return Ok(None);
        }
        self.asked += 1;
        Ok(Some(Query::at(0)))
    }

    fn observe(&mut self, _query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        match (answer.label, answer.contrast) {
            (false, Contrast::Point { x, label: true }) => self.terms.push(x),
            (false, Contrast::Omega) => {}
            _ => return Err(Error::InconsistentOracle(format!("{} is not a monotone DNF answer", answer))),
        }
        Ok(())
    }

    fn hypothesis(&self) -> Option<Concept> {
        Some(MdnfFormula::new(self.m, self.terms.iter().copied()).to_concept())
    }
}
