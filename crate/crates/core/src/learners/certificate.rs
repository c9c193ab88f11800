//! Replay the optimal moves stored by an exact contrastive search.

use std::sync::{Arc, Mutex};

use crate::domain::VersionSpace;
use crate::error::Result;
use crate::exact::{ContrastGame, Solver};
use crate::protocol::{Learner, OracleAnswer, Query};

#[derive(Clone)]
pub struct CertificateLearner {
    solver: Arc<Mutex<Solver<ContrastGame>>>,
    round: usize,
}

impl CertificateLearner {
    pub fn new(solver: Arc<Mutex<Solver<ContrastGame>>>) -> Self {
        CertificateLearner { solver, round: 0 }
    }
}

impl Learner for CertificateLearner {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>> {
        let mut solver = self.solver.lock().expect("solver lock");
        let mv = solver.best_move(vs.mask(), self.round)?;
        Ok(mv.map(|i| solver.game().queries()[i].clone()))
    }

    fn observe(&mut self, _query: &Query, _answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        self.round += 1;
        Ok(())
    }
}
