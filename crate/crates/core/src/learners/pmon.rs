//! One query identifies a positive monomial under Hamming `CS_min`.

use crate::domain::{Concept, VersionSpace};
use crate::error::{Error, Result};
use crate::protocol::{Contrast, Learner, OracleAnswer, Query};

/// Queries `0^m` once. Label 1 means the empty monomial; otherwise the
/// contrastive example is `1_I` for the target `v_I`.
#[derive(Clone, Debug)]
pub struct PmonLearner {
    m: usize,
    asked: bool,
    hypothesis: Option<Concept>,
}

impl PmonLearner {
    pub fn new(m: usize) -> Self {
        PmonLearner { m, asked: false, hypothesis: None }
    }
}

impl Learner for PmonLearner {
    fn next_query(&mut self, _vs: &VersionSpace) -> Result<Option<Query>> {
        if self.asked {
            return Ok(None);
        }
        self.asked = true;
        Ok(Some(super::zero_query()))
    }

    fn observe(&mut self, _query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        let n = 1 << self.m;
        let mask = match (answer.label, answer.contrast) {
            (true, Contrast::Omega) => 0,
            (false, Contrast::Point { x, label: true }) => x,
            _ => return Err(Error::InconsistentOracle(format!("{} is not a positive-monomial answer", answer))),
        };
        self.hypothesis = Some(Concept::from_fn(n, |x| x & mask == mask));
        Ok(())
    }

    fn hypothesis(&self) -> Option<Concept> {
        self.hypothesis.clone()
    }
}
