//! The contrastive query protocol: queries, answers, contrast-set
//! functions, version-space updates and the interaction engine.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::domain::{delta, Concept, ConceptClass, Rational, VersionSpace};
use crate::error::{Error, Result};
use crate::metrics::parse_rational;

/// A query point, with a radius in the proximity model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub point: usize,
    pub radius: Option<Rational>,
}

impl Query {
    pub fn at(point: usize) -> Self {
        Query { point, radius: None }
    }

    pub fn within(point: usize, radius: Rational) -> Self {
        Query { point, radius: Some(radius) }
    }
}

/// The contrastive part of an answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Contrast {
    Omega,
    Point { x: usize, label: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OracleAnswer {
    pub label: bool,
    pub contrast: Contrast,
}

impl OracleAnswer {
    pub fn omega(label: bool) -> Self {
        OracleAnswer { label, contrast: Contrast::Omega }
    }

    pub fn point(label: bool, x: usize, x_label: bool) -> Self {
        OracleAnswer { label, contrast: Contrast::Point { x, label: x_label } }
    }
}

impl fmt::Display for OracleAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.contrast {
            Contrast::Omega => write!(f, "({}, omega)", self.label as u8),
            Contrast::Point { x, label } => write!(f, "({}, x{}:{})", self.label as u8, x, label as u8),
        }
    }
}

/// What a contrast-set function sees when asked about one concept.
pub struct CsContext<'a> {
    pub class: &'a ConceptClass,
    pub concept: usize,
    /// Version space before the current update.
    pub vs: &'a VersionSpace,
    /// Zero-based round index.
    pub round: usize,
}

/// `CS(x, C, vs)`: the admissible contrastive examples for a query.
pub trait ContrastSet: Send + Sync {
    fn name(&self) -> String;

    /// Sorted admissible instances, empty for omega.
    fn contrast_set(&self, query: &Query, ctx: &CsContext) -> Vec<usize>;

    fn admits(&self, query: &Query, ctx: &CsContext, x: usize) -> bool {
        self.contrast_set(query, ctx).binary_search(&x).is_ok()
    }

    fn is_empty_for(&self, query: &Query, ctx: &CsContext) -> bool {
        self.contrast_set(query, ctx).is_empty()
    }

    fn depends_on_vs(&self) -> bool {
        false
    }

    fn depends_on_round(&self) -> bool {
        false
    }

    /// Whether queries carry a radius.
    fn uses_radius(&self) -> bool {
        false
    }

    /// Radii worth querying at `x`.
    fn radius_options(&self, _class: &ConceptClass, _x: usize) -> Vec<Rational> {
        Vec::new()
    }
}

/// Keep the concepts of `vs` for which `answer` is an honest reply to
/// `query` at round `round`.
pub fn restrict_version_space(
    vs: &VersionSpace,
    query: &Query,
    answer: &OracleAnswer,
    cs: &dyn ContrastSet,
    round: usize,
) -> VersionSpace {
    let class = vs.class().clone();
    vs.retain(|c| {
        let concept = class.concept(c);
        if concept.label(query.point) != answer.label {
            return false;
        }
        let ctx = CsContext { class: &class, concept: c, vs, round };
        match answer.contrast {
            Contrast::Omega => cs.is_empty_for(query, &ctx),
            Contrast::Point { x, label } => concept.label(x) == label && cs.admits(query, &ctx, x),
        }
    })
}

/// Whether every member of `vs` is within `eps` of `target`.
pub fn epsilon_approximates(vs: &VersionSpace, target: &Concept, eps: Rational) -> Result<bool> {
    let class = vs.class();
    for c in vs.members() {
        if delta(class.concept(c), target)? > eps {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A learner in the contrastive model.
pub trait Learner {
    /// Next query, or `None` to stop.
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>>;

    /// Receive the answer together with the updated version space.
    fn observe(&mut self, query: &Query, answer: &OracleAnswer, vs: &VersionSpace) -> Result<()>;

    /// The learner's own reconstruction of the target, when it has one.
    fn hypothesis(&self) -> Option<Concept> {
        None
    }
}

/// Everything an oracle strategy may look at when picking a contrastive
/// example for the fixed target.
pub struct ChoiceContext<'a> {
    pub query: &'a Query,
    pub target: usize,
    pub vs: &'a VersionSpace,
    pub admissible: &'a [usize],
    pub round: usize,
    pub cs: &'a dyn ContrastSet,
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>> {
        (**self).next_query(vs)
    }

    fn observe(&mut self, query: &Query, answer: &OracleAnswer, vs: &VersionSpace) -> Result<()> {
        (**self).observe(query, answer, vs)
    }

    fn hypothesis(&self) -> Option<Concept> {
        (**self).hypothesis()
    }
}

/// Picks one admissible contrastive example.
pub trait OracleStrategy {
    fn name(&self) -> String;

    /// Must return `None` iff `admissible` is empty.
    fn choose(&mut self, ctx: &ChoiceContext) -> Result<Option<usize>>;

    fn seed(&self) -> Option<u64> {
        None
    }
}

/// When the protocol stops successfully.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Approximate(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The version space is the target alone.
    Identified,
    /// Every remaining concept is within epsilon of the target.
    Approximated,
    /// The learner stopped without reaching either condition.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InteractionRecord {
    pub round: usize,
    pub query: Query,
    pub answer: OracleAnswer,
    pub vs_size: usize,
}

impl InteractionRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "query": self.query.point,
            "label": self.answer.label as u8,
            "contrast": match self.answer.contrast {
                Contrast::Omega => json!("omega"),
                Contrast::Point { x, label } => json!({ "x": x, "y": label as u8 }),
            },
            "vs_size": self.vs_size,
        });
        if let Some(r) = self.query.radius {
            v["radius"] = json!(r.to_string());
        }
        v
    }

    pub fn from_json(round: usize, v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: round + 1, msg: msg.to_string() };
        let point = v["query"].as_u64().ok_or_else(|| bad("missing query"))? as usize;
        let radius = match &v["radius"] {
            Value::Null => None,
            Value::String(s) => Some(parse_rational(s).ok_or_else(|| bad("bad radius"))?),
            Value::Number(n) => Some(Rational::from_integer(n.as_i64().ok_or_else(|| bad("bad radius"))?)),
            _ => return Err(bad("bad radius")),
        };
        let label = v["label"].as_u64().ok_or_else(|| bad("missing label"))? == 1;
        let contrast = match &v["contrast"] {
            Value::String(s) if s == "omega" => Contrast::Omega,
            Value::Object(o) => Contrast::Point {
                x: o.get("x").and_then(Value::as_u64).ok_or_else(|| bad("bad contrast"))? as usize,
                label: o.get("y").and_then(Value::as_u64).ok_or_else(|| bad("bad contrast"))? == 1,
            },
            _ => return Err(bad("bad contrast")),
        };
        let vs_size = v["vs_size"].as_u64().ok_or_else(|| bad("missing vs_size"))? as usize;
        Ok(InteractionRecord { round, query: Query { point, radius }, answer: OracleAnswer { label, contrast }, vs_size })
    }
}

/// A finished interaction.
#[derive(Clone, Debug)]
pub struct Trace {
    pub target: usize,
    pub records: Vec<InteractionRecord>,
    pub outcome: Outcome,
    pub final_vs: VersionSpace,
}

impl Trace {
    pub fn queries(&self) -> usize {
        self.records.len()
    }

    /// JSON lines: one header followed by one object per round.
    pub fn to_jsonl(&self, header: Value) -> String {
        let mut out = serde_json::to_string(&json!({ "header": header })).expect("json");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(&r.to_json()).expect("json"));
            out.push('\n');
        }
        out
    }
}

/// Replay recorded rounds and check the stored version-space sizes.
pub fn replay(class: Arc<ConceptClass>, cs: &dyn ContrastSet, records: &[InteractionRecord]) -> Result<VersionSpace> {
    let mut vs = VersionSpace::full(class);
    for r in records {
        vs = restrict_version_space(&vs, &r.query, &r.answer, cs, r.round);
        if vs.len() != r.vs_size {
            return Err(Error::InconsistentOracle(format!(
                "round {}: replayed version space has {} members, trace says {}",
                r.round,
                vs.len(),
                r.vs_size
            )));
        }
    }
    Ok(vs)
}

/// Configuration shared by every run against one class.
#[derive(Clone)]
pub struct ProtocolConfig {
    pub class: Arc<ConceptClass>,
    pub cs: Arc<dyn ContrastSet>,
    pub mode: Mode,
    /// Defaults to `|C| * |X|`.
    pub max_rounds: Option<usize>,
}

impl ProtocolConfig {
    pub fn new(class: Arc<ConceptClass>, cs: Arc<dyn ContrastSet>) -> Self {
        ProtocolConfig { class, cs, mode: Mode::Exact, max_rounds: None }
    }

    pub fn approximate(mut self, eps: Rational) -> Self {
        self.mode = Mode::Approximate(eps);
        self
    }

    pub fn max_rounds(&self) -> usize {
        self.max_rounds.unwrap_or(self.class.len().max(1) * self.class.n().max(1))
    }

    /// Number of distinct moves; that many uninformative rounds in a row
    /// means the learner cannot make progress.
    fn move_count(&self) -> usize {
        if self.cs.uses_radius() {
            (0..self.class.n()).map(|x| self.cs.radius_options(&self.class, x).len().max(1)).sum()
        } else {
            self.class.n()
        }
    }
}

/// Run one learner against one target with one oracle strategy.
pub fn run_protocol(
    cfg: &ProtocolConfig,
    learner: &mut dyn Learner,
    oracle: &mut dyn OracleStrategy,
    target: usize,
) -> Result<Trace> {
    let class = cfg.class.clone();
    if target >= class.len() {
        return Err(Error::InvalidParameter(format!("target {} outside class of size {}", target, class.len())));
    }
    let target_concept = class.concept(target).clone();
    let max_rounds = cfg.max_rounds();
    let mut vs = VersionSpace::full(class.clone());
    let mut records = Vec::new();
    let mut stalled = 0usize;
    let mut stall_limit = None;
    loop {
        let done = match cfg.mode {
            Mode::Exact => vs.len() == 1,
            Mode::Approximate(eps) => vs.len() == 1 || epsilon_approximates(&vs, &target_concept, eps)?,
        };
        if done {
            let outcome = if vs.len() == 1 { Outcome::Identified } else { Outcome::Approximated };
            return Ok(Trace { target, records, outcome, final_vs: vs });
        }
        let round = records.len();
        if round >= max_rounds {
            return Err(Error::RoundLimit(max_rounds));
        }
        let query = match learner.next_query(&vs)? {
            Some(q) => q,
            None => return Ok(Trace { target, records, outcome: Outcome::Exhausted, final_vs: vs }),
        };
        if query.point >= class.n() {
            return Err(Error::InvalidParameter(format!("query point {} outside domain", query.point)));
        }
        if query.radius.is_some() != cfg.cs.uses_radius() {
            return Err(Error::InvalidParameter("query radius does not match the contrast model".into()));
        }
        let ctx = CsContext { class: &class, concept: target, vs: &vs, round };
        let admissible = cfg.cs.contrast_set(&query, &ctx);
        let choice = oracle.choose(&ChoiceContext {
            query: &query,
            target,
            vs: &vs,
            admissible: &admissible,
            round,
            cs: cfg.cs.as_ref(),
        })?;
        let label = target_concept.label(query.point);
        let answer = match choice {
            None if admissible.is_empty() => OracleAnswer::omega(label),
            Some(x) if admissible.binary_search(&x).is_ok() => OracleAnswer::point(label, x, target_concept.label(x)),
            other => {
                return Err(Error::DishonestOracle(format!(
                    "strategy {} chose {:?} outside the admissible set",
                    oracle.name(),
                    other
                )))
            }
        };
        let next = restrict_version_space(&vs, &query, &answer, cfg.cs.as_ref(), round);
        if next.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        if !next.contains(target) {
            return Err(Error::DishonestOracle("target eliminated by its own answer".into()));
        }
        if next.len() == vs.len() {
            stalled += 1;
            let limit = *stall_limit.get_or_insert_with(|| cfg.move_count());
            if stalled >= limit {
                return Err(Error::NonLearnable);
            }
        } else {
            stalled = 0;
        }
        vs = next;
        records.push(InteractionRecord { round, query: query.clone(), answer, vs_size: vs.len() });
        learner.observe(&query, &answer, &vs)?;
    }
}
