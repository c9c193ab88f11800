//! Greedy baseline: pick the query whose worst answer leaves the fewest
//! concepts.

use std::sync::Arc;

use crate::domain::VersionSpace;
use crate::error::{Error, Result};
use crate::exact::{ContrastGame, Game};
use crate::protocol::{Learner, OracleAnswer, Query};

#[derive(Clone)]
pub struct HalvingLearner {
    game: Arc<ContrastGame>,
    pool: Option<Vec<usize>>,
    round: usize,
}

impl HalvingLearner {
    pub fn new(game: Arc<ContrastGame>) -> Self {
        HalvingLearner { game, pool: None, round: 0 }
    }

    /// Only query the given instances.
    pub fn with_query_pool(mut self, pool: Vec<usize>) -> Self {
        self.pool = Some(pool);
        self
    }
}

impl Learner for HalvingLearner {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>> {
        if vs.len() <= 1 {
            return Ok(None);
        }
        let mut best: Option<(usize, usize)> = None;
        for (i, q) in self.game.queries().iter().enumerate() {
            if let Some(pool) = &self.pool {
                if !pool.contains(&q.point) {
                    continue;
                }
            }
            let worst = self
                .game
                .children(&i, vs.mask(), self.round)
                .iter()
                .map(|c| c.count_ones(..))
                .max()
                .unwrap_or(0);
            if best.map_or(true, |(w, _)| worst < w) {
                best = Some((worst, i));
            }
        }
        match best {
            Some((w, i)) if w < vs.len() => Ok(Some(self.game.queries()[i].clone())),
            _ => Err(Error::NonLearnable),
        }
    }

    fn observe(&mut self, _query: &Query, _answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        self.round += 1;
        Ok(())
    }
}
