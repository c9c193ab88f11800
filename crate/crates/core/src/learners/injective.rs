//! Learner for contrast sets defined by an injective map: walk the
//! enumeration, jumping past every returned instance.

use std::sync::Arc;

use crate::domain::VersionSpace;
use crate::error::Result;
use crate::oracles::CsInjective;
use crate::protocol::{Contrast, Learner, OracleAnswer, Query};

#[derive(Clone)]
pub struct InjectiveLearner {
    cs: Arc<CsInjective>,
    next: usize,
    done: bool,
}

impl InjectiveLearner {
    pub fn new(cs: Arc<CsInjective>) -> Self {
        InjectiveLearner { cs, next: 0, done: false }
    }
}

impl Learner for InjectiveLearner {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>> {
        if self.done || vs.len() <= 1 || self.next >= self.cs.enumeration().len() {
            return Ok(None);
        }
        Ok(Some(Query::at(self.cs.enumeration()[self.next])))
    }

    fn observe(&mut self, _query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        match answer.contrast {
            Contrast::Point { x, .. } => self.next = self.cs.position(x) + 1,
            Contrast::Omega => self.done = true,
        }
        Ok(())
    }
}
