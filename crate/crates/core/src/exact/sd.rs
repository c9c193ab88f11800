//! Exact self-directed complexity.
//!
//! Instances on which the version space agrees cost nothing and do not
//! change it, and every instance already labelled is such an instance, so
//! the state is the version space alone.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::caps::Caps;
use crate::domain::ConceptClass;
use crate::error::{Error, Result};

/// Memoised solver returning the optimal worst-case mistake count and an
/// optimal `(instance, prediction)` for every solved state.
pub struct SdSolver {
    class: Arc<ConceptClass>,
    columns: Vec<FixedBitSet>,
    memo: HashMap<FixedBitSet, (u32, Option<(usize, bool)>)>,
    max_memo: usize,
}

impl SdSolver {
    pub fn new(class: Arc<ConceptClass>, caps: &Caps) -> Self {
        let k = class.len();
        let columns = (0..class.n())
            .map(|x| {
                let mut col = FixedBitSet::with_capacity(k);
                for c in 0..k {
                    col.set(c, class.concept(c).label(x));
                }
                col
            })
            .collect();
        SdSolver { class, columns, memo: HashMap::new(), max_memo: caps.max_memo }
    }

    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    pub fn root_value(&mut self) -> Result<u32> {
        let mut full = FixedBitSet::with_capacity(self.class.len());
        full.insert_range(..);
        self.value(&full)
    }

    pub fn best_move(&mut self, vs: &FixedBitSet) -> Result<Option<(usize, bool)>> {
        self.value(vs)?;
        Ok(self.memo.get(vs).and_then(|(_, m)| *m))
    }

    pub fn value(&mut self, vs: &FixedBitSet) -> Result<u32> {
        if vs.count_ones(..) <= 1 {
            return Ok(0);
        }
        if let Some((v, _)) = self.memo.get(vs) {
            return Ok(*v);
        }
        if self.memo.len() >= self.max_memo {
            return Err(Error::CapExceeded(format!("memo holds {} entries (max_memo)", self.memo.len())));
        }
        let mut best = u32::MAX;
        let mut best_move = None;
        for x in 0..self.class.n() {
            let mut pos = self.columns[x].clone();
            pos.intersect_with(vs);
            let mut neg = vs.clone();
            neg.difference_with(&pos);
            if pos.is_clear() || neg.is_clear() {
                continue;
            }
            let a = self.value(&pos)?;
            let b = self.value(&neg)?;
            let (cost, pred) = if a.max(b + 1) <= b.max(a + 1) { (a.max(b + 1), true) } else { (b.max(a + 1), false) };
            if cost < best {
                best = cost;
                best_move = Some((x, pred));
                if best == 1 {
                    break;
                }
            }
        }
        self.memo.insert(vs.clone(), (best, best_move));
        Ok(best)
    }
}
