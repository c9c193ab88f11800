//! Exact complexities by exhaustive search: contrastive, membership,
//! examples-plus-membership and self-directed, plus VC dimension.

pub mod game;
pub mod sd;
pub mod vcd;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::domain::ConceptClass;
use crate::error::Result;
use crate::oracles::NoContrast;
use crate::protocol::ContrastSet;

pub use game::{ContrastGame, ExMqGame, ExMqMove, Game, MinimaxOracle, Solver, Value};
pub use sd::SdSolver;
pub use vcd::{is_shattered, vcd};

/// Result of one exact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameReport {
    pub value: Value,
    pub memo_entries: usize,
}

/// Worst-case number of contrastive queries of an optimal learner.
pub fn exact_contrast_complexity(class: Arc<ConceptClass>, cs: Arc<dyn ContrastSet>, caps: &Caps) -> Result<GameReport> {
    let mut solver = Solver::new(ContrastGame::new(class, cs), caps);
    let value = solver.root_value()?;
    Ok(GameReport { value, memo_entries: solver.memo_entries() })
}

/// Worst-case number of membership queries of an optimal learner.
pub fn exact_mq_complexity(class: Arc<ConceptClass>, caps: &Caps) -> Result<GameReport> {
    exact_contrast_complexity(class, Arc::new(NoContrast), caps)
}

/// Worst-case number of calls with positive examples, negative examples
/// and membership queries.
pub fn exact_ex_mq_complexity(class: Arc<ConceptClass>, caps: &Caps) -> Result<GameReport> {
    let mut solver = Solver::new(ExMqGame::new(class), caps);
    let value = solver.root_value()?;
    Ok(GameReport { value, memo_entries: solver.memo_entries() })
}

/// Self-directed complexity: optimal worst-case number of mistakes.
pub fn exact_sd_complexity(class: Arc<ConceptClass>, caps: &Caps) -> Result<GameReport> {
    let mut solver = SdSolver::new(class, caps);
    let value = Value::Finite(solver.root_value()?);
    Ok(GameReport { value, memo_entries: solver.memo_entries() })
}
