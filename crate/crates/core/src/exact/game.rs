//! Minimax search over version spaces.
//!
//! A state is a version space (plus the round index when the contrast sets
//! depend on it). The learner picks a move, the adversary picks any target
//! in the version space together with any honest answer for it, and the
//! game ends when one concept is left. The adversary's two choices are
//! folded into one: the children of a move are the distinct non-empty sets
//! `vs ∩ {C : answer a is honest for C}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::domain::{ConceptClass, VersionSpace};
use crate::error::{Error, Result};
use crate::protocol::{
    restrict_version_space, ChoiceContext, Contrast, ContrastSet, CsContext, OracleAnswer, OracleStrategy, Query,
};

/// A game value: a number of rounds, or unbounded when some reachable
/// state admits no informative move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Finite(u32),
    Unbounded,
}

impl Value {
    pub fn finite(self) -> Option<u32> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Unbounded => None,
        }
    }

    fn plus_one(self) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(v + 1),
            Value::Unbounded => Value::Unbounded,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{}", v),
            Value::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// A two-player game whose states are version-space masks.
pub trait Game {
    type Move: Clone + fmt::Debug;

    fn universe(&self) -> usize;

    fn moves(&self, vs: &FixedBitSet, round: usize) -> Vec<Self::Move>;

    /// Distinct non-empty successor version spaces.
    fn children(&self, mv: &Self::Move, vs: &FixedBitSet, round: usize) -> Vec<FixedBitSet>;

    fn round_dependent(&self) -> bool {
        false
    }
}

type MemoKey = (FixedBitSet, usize);

/// Memoised minimax solver. The memo doubles as the strategy certificate:
/// every solved state stores an optimal move.
pub struct Solver<G: Game> {
    game: G,
    memo: HashMap<MemoKey, (Value, Option<G::Move>)>,
    max_memo: usize,
}

impl<G: Game> Solver<G> {
    pub fn new(game: G, caps: &Caps) -> Self {
        Solver { game, memo: HashMap::new(), max_memo: caps.max_memo }
    }

    pub fn game(&self) -> &G {
        &self.game
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    pub fn full_mask(&self) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.game.universe());
        m.insert_range(..);
        m
    }

    pub fn root_value(&mut self) -> Result<Value> {
        let full = self.full_mask();
        self.value(&full, 0)
    }

    fn key(&self, vs: &FixedBitSet, round: usize) -> MemoKey {
        (vs.clone(), if self.game.round_dependent() { round } else { 0 })
    }

    /// An optimal move at this state, `None` when the state is terminal or
    /// unbounded.
    pub fn best_move(&mut self, vs: &FixedBitSet, round: usize) -> Result<Option<G::Move>> {
        if vs.count_ones(..) <= 1 {
            return Ok(None);
        }
        self.value(vs, round)?;
        let key = self.key(vs, round);
        Ok(self.memo.get(&key).and_then(|(_, m)| m.clone()))
    }

    /// Every move achieving the optimal value at this state.
    pub fn optimal_moves(&mut self, vs: &FixedBitSet, round: usize) -> Result<Vec<G::Move>> {
        let target = self.value(vs, round)?;
        if vs.count_ones(..) <= 1 || target == Value::Unbounded {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for mv in self.game.moves(vs, round) {
            let children = self.game.children(&mv, vs, round);
            if children.iter().any(|c| c == vs) {
                continue;
            }
            let mut worst = Value::Finite(0);
            for child in &children {
                worst = worst.max(self.value(child, round + 1)?.plus_one());
                if worst > target {
                    break;
                }
            }
            if worst == target {
                out.push(mv);
            }
        }
        Ok(out)
    }

    pub fn value(&mut self, vs: &FixedBitSet, round: usize) -> Result<Value> {
        if vs.count_ones(..) <= 1 {
            return Ok(Value::Finite(0));
        }
        let key = self.key(vs, round);
        if let Some((v, _)) = self.memo.get(&key) {
            return Ok(*v);
        }
        if self.memo.len() >= self.max_memo {
            return Err(Error::CapExceeded(format!("memo holds {} entries (max_memo)", self.memo.len())));
        }
        let mut candidates: Vec<(usize, G::Move, Vec<FixedBitSet>)> = Vec::new();
        for mv in self.game.moves(vs, round) {
            let mut children = self.game.children(&mv, vs, round);
            if children.iter().any(|c| c == vs) {
                continue;
            }
            children.sort_by_key(|c| std::cmp::Reverse(c.count_ones(..)));
            let worst = children.first().map_or(0, |c| c.count_ones(..));
            candidates.push((worst, mv, children));
        }
        candidates.sort_by_key(|(w, _, _)| *w);
        let mut best = Value::Unbounded;
        let mut best_move = None;
        for (_, mv, children) in candidates {
            let mut worst = Value::Finite(0);
            let mut pruned = false;
            for child in &children {
                if let Value::Finite(b) = best {
                    let lower = 1 + (child.count_ones(..) > 1) as u32;
                    if lower >= b {
                        pruned = true;
                        break;
                    }
                }
                let v = self.value(child, round + 1)?.plus_one();
                worst = worst.max(v);
                if worst >= best {
                    pruned = true;
                    break;
                }
            }
            if !pruned && worst < best {
                best = worst;
                best_move = Some(mv);
                if best == Value::Finite(1) {
                    break;
                }
            }
        }
        self.memo.insert(key, (best, best_move));
        Ok(best)
    }
}

/// The contrastive query game for one class and contrast-set function.
/// Moves index into [`ContrastGame::queries`].
pub struct ContrastGame {
    class: Arc<ConceptClass>,
    cs: Arc<dyn ContrastSet>,
    queries: Vec<Query>,
    static_answers: Option<Vec<Vec<(OracleAnswer, FixedBitSet)>>>,
}

impl ContrastGame {
    pub fn new(class: Arc<ConceptClass>, cs: Arc<dyn ContrastSet>) -> Self {
        let mut queries = Vec::new();
        for x in 0..class.n() {
            if cs.uses_radius() {
                for r in cs.radius_options(&class, x) {
                    queries.push(Query::within(x, r));
                }
            } else {
                queries.push(Query::at(x));
            }
        }
        let mut game = ContrastGame { class, cs, queries, static_answers: None };
        if !game.cs.depends_on_vs() && !game.cs.depends_on_round() {
            let full = VersionSpace::full(game.class.clone());
            let table = (0..game.queries.len()).map(|q| game.compute_answers(q, &full, 0)).collect();
            game.static_answers = Some(table);
        }
        game
    }

    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }

    pub fn cs(&self) -> &Arc<dyn ContrastSet> {
        &self.cs
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn query_index(&self, q: &Query) -> Option<usize> {
        self.queries.iter().position(|p| p == q)
    }

    /// Every answer some member of `vs` could honestly give to move `mv`,
    /// with the set of members for which it is honest.
    pub fn answers(&self, mv: usize, vs: &VersionSpace, round: usize) -> Vec<(OracleAnswer, FixedBitSet)> {
        match &self.static_answers {
            Some(table) => table[mv]
                .iter()
                .filter_map(|(a, mask)| {
                    let mut m = mask.clone();
                    m.intersect_with(vs.mask());
                    (!m.is_clear()).then_some((*a, m))
                })
                .collect(),
            None => self.compute_answers(mv, vs, round),
        }
    }

    fn compute_answers(&self, mv: usize, vs: &VersionSpace, round: usize) -> Vec<(OracleAnswer, FixedBitSet)> {
        let q = &self.queries[mv];
        let mut groups: BTreeMap<(bool, Option<(usize, bool)>), FixedBitSet> = BTreeMap::new();
        for c in vs.members() {
            let concept = self.class.concept(c);
            let label = concept.label(q.point);
            let ctx = CsContext { class: &self.class, concept: c, vs, round };
            let set = self.cs.contrast_set(q, &ctx);
            if set.is_empty() {
                groups.entry((label, None)).or_insert_with(|| FixedBitSet::with_capacity(self.class.len())).insert(c);
            }
            for x in set {
                groups
                    .entry((label, Some((x, concept.label(x)))))
                    .or_insert_with(|| FixedBitSet::with_capacity(self.class.len()))
                    .insert(c);
            }
        }
        groups
            .into_iter()
            .map(|((label, contrast), mask)| {
                let answer = match contrast {
                    None => OracleAnswer::omega(label),
                    Some((x, l)) => OracleAnswer { label, contrast: Contrast::Point { x, label: l } },
                };
                (answer, mask)
            })
            .collect()
    }
}

fn dedup_children(mut children: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    children.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    children.dedup();
    children
}

impl Game for ContrastGame {
    type Move = usize;

    fn universe(&self) -> usize {
        self.class.len()
    }

    fn moves(&self, _vs: &FixedBitSet, _round: usize) -> Vec<usize> {
        (0..self.queries.len()).collect()
    }

    fn children(&self, mv: &usize, vs: &FixedBitSet, round: usize) -> Vec<FixedBitSet> {
        let vs = VersionSpace::from_mask(self.class.clone(), vs.clone());
        dedup_children(self.answers(*mv, &vs, round).into_iter().map(|(_, m)| m).collect())
    }

    fn round_dependent(&self) -> bool {
        self.cs.depends_on_round()
    }
}

/// Queries available in the examples-plus-membership model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExMqMove {
    Member(usize),
    Positive,
    Negative,
}

/// Game for learning with positive examples, negative examples and
/// membership queries. An example oracle may return any instance with the
/// requested label, or a dummy when none exists.
pub struct ExMqGame {
    class: Arc<ConceptClass>,
    columns: Vec<FixedBitSet>,
    no_positive: FixedBitSet,
    no_negative: FixedBitSet,
}

impl ExMqGame {
    pub fn new(class: Arc<ConceptClass>) -> Self {
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
        let mut no_positive = FixedBitSet::with_capacity(k);
        let mut no_negative = FixedBitSet::with_capacity(k);
        for c in 0..k {
            match class.concept(c).constant_value() {
                Some(false) => no_positive.insert(c),
                Some(true) => no_negative.insert(c),
                None => {}
            }
        }
        ExMqGame { class, columns, no_positive, no_negative }
    }

    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }
}

impl Game for ExMqGame {
    type Move = ExMqMove;

    fn universe(&self) -> usize {
        self.class.len()
    }

    fn moves(&self, _vs: &FixedBitSet, _round: usize) -> Vec<ExMqMove> {
        let mut m = vec![ExMqMove::Positive, ExMqMove::Negative];
        m.extend((0..self.class.n()).map(ExMqMove::Member));
        m
    }

    fn children(&self, mv: &ExMqMove, vs: &FixedBitSet, _round: usize) -> Vec<FixedBitSet> {
        let inter = |a: &FixedBitSet| {
            let mut m = a.clone();
            m.intersect_with(vs);
            m
        };
        let mut out = Vec::new();
        match mv {
            ExMqMove::Member(x) => {
                let pos = inter(&self.columns[*x]);
                let mut neg = vs.clone();
                neg.difference_with(&pos);
                out.push(pos);
                out.push(neg);
            }
            ExMqMove::Positive | ExMqMove::Negative => {
                let want = matches!(mv, ExMqMove::Positive);
                for col in &self.columns {
                    let mut m = inter(col);
                    if !want {
                        let mut n = vs.clone();
                        n.difference_with(&m);
                        m = n;
                    }
                    out.push(m);
                }
                out.push(inter(if want { &self.no_positive } else { &self.no_negative }));
            }
        }
        dedup_children(out.into_iter().filter(|m| !m.is_clear()).collect())
    }
}

/// Adversary that steers every answer towards the child with the largest
/// game value, breaking ties by the lowest instance index.
pub struct MinimaxOracle {
    solver: Solver<ContrastGame>,
}

impl MinimaxOracle {
    pub fn new(class: Arc<ConceptClass>, cs: Arc<dyn ContrastSet>, caps: &Caps) -> Self {
        MinimaxOracle { solver: Solver::new(ContrastGame::new(class, cs), caps) }
    }

    pub fn solver(&mut self) -> &mut Solver<ContrastGame> {
        &mut self.solver
    }
}

impl OracleStrategy for MinimaxOracle {
    fn name(&self) -> String {
        "minimax".into()
    }

    fn choose(&mut self, ctx: &ChoiceContext) -> Result<Option<usize>> {
        let class = self.solver.game().class().clone();
        let target = class.concept(ctx.target);
        let label = target.label(ctx.query.point);
        let mut best: Option<(Value, usize)> = None;
        for &x in ctx.admissible {
            let answer = OracleAnswer::point(label, x, target.label(x));
            let child = restrict_version_space(ctx.vs, ctx.query, &answer, ctx.cs, ctx.round);
            let v = self.solver.value(child.mask(), ctx.round + 1)?;
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, x));
            }
        }
        Ok(best.map(|(_, x)| x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{gen_pmon, gen_singletons};
    use crate::metrics::Metric;
    use crate::oracles::{CsMin, NoContrast};

    #[test]
    fn membership_game_on_singletons() {
        let class = Arc::new(gen_singletons(4, &Caps::default()).unwrap());
        let mut s = Solver::new(ContrastGame::new(class, Arc::new(NoContrast)), &Caps::default());
        assert_eq!(s.root_value().unwrap(), Value::Finite(3));
    }

    #[test]
    fn pmon_contrast_value_is_one() {
        let class = Arc::new(gen_pmon(3, &Caps::default()).unwrap());
        let mut s = Solver::new(ContrastGame::new(class, Arc::new(CsMin::new(Metric::Hamming))), &Caps::default());
        assert_eq!(s.root_value().unwrap(), Value::Finite(1));
        let full = s.full_mask();
        let mv = s.best_move(&full, 0).unwrap().unwrap();
        assert_eq!(s.game().queries()[mv], Query::at(0));
    }

    #[test]
    fn memo_cap_is_reported() {
        let class = Arc::new(gen_singletons(6, &Caps::default()).unwrap());
        let caps = Caps { max_memo: 1, ..Caps::default() };
        let mut s = Solver::new(ContrastGame::new(class, Arc::new(NoContrast)), &caps);
        assert!(matches!(s.root_value(), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn examples_game_on_singletons() {
        let class = Arc::new(gen_singletons(4, &Caps::default()).unwrap());
        let mut s = Solver::new(ExMqGame::new(class), &Caps::default());
        assert_eq!(s.root_value().unwrap(), Value::Finite(1));
    }
}
