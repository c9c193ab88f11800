//! Run a minimum-distance learner in the proximity model.
//!
//! For every inner query `x` the wrapper searches the radius at which the
//! proximity oracle first returns a contrastive example. The candidate
//! radii are the nearest-opposite distances of the concepts still in the
//! version space, so labels and earlier answers shrink the search. Once all
//! remaining concepts agree on one minimum-distance answer, that answer is
//! forwarded to the inner learner.

use std::collections::HashMap;
use std::sync::Arc;

use crate::domain::{Concept, ConceptClass, Rational, VersionSpace};
use crate::error::{Error, Result};
use crate::metrics::{spectrum_size, Metric};
use crate::oracles::CsMin;
use crate::protocol::{restrict_version_space, Contrast, Learner, OracleAnswer, Query};

#[derive(Clone)]
pub struct ProxFromMin<L> {
    inner: L,
    class: Arc<ConceptClass>,
    metric: Metric,
    min_cs: Arc<CsMin>,
    inner_vs: VersionSpace,
    inner_round: usize,
    pending: Option<usize>,
    held: Option<(usize, Rational)>,
    per_inner: Vec<usize>,
}

impl<L: Learner> ProxFromMin<L> {
    pub fn new(inner: L, class: Arc<ConceptClass>, metric: Metric) -> Result<Self> {
        if !metric.is_static() {
            return Err(Error::InvalidMetric("proximity search needs a static metric".into()));
        }
        metric.check_domain(class.n())?;
        if spectrum_size(&metric, class.n()) == 0 {
            return Err(Error::InvalidParameter("metric has an empty distance spectrum".into()));
        }
        let min_cs = Arc::new(CsMin::new(metric.clone()));
        Ok(ProxFromMin {
            inner,
            inner_vs: VersionSpace::full(class.clone()),
            class,
            metric,
            min_cs,
            inner_round: 0,
            pending: None,
            held: None,
            per_inner: Vec::new(),
        })
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }

    /// Proximity queries spent on each inner query so far.
    pub fn queries_per_inner(&self) -> &[usize] {
        &self.per_inner
    }

    /// The minimum-distance answer every remaining concept would give.
    fn forwardable(&self, x: usize, vs: &VersionSpace) -> Option<OracleAnswer> {
        let label = vs.agreed_label(x)?;
        let mut radius: Option<Option<Rational>> = None;
        for c in vs.members() {
            let r = self.min_cs.nearest_opposite(&self.class, c, x);
            match radius {
                None => radius = Some(r),
                Some(prev) if prev != r => return None,
                _ => {}
            }
        }
        let r = match radius? {
            None => return Some(OracleAnswer::omega(label)),
            Some(r) => r,
        };
        if let Some((p, d)) = self.held {
            if d == r {
                return Some(OracleAnswer::point(label, p, !label));
            }
        }
        (0..self.class.n())
            .filter(|&p| self.metric.fixed(x, p) == r)
            .find(|&p| vs.agreed_label(p) == Some(!label))
            .map(|p| OracleAnswer::point(label, p, !label))
    }

    fn choose_radius(&self, x: usize, vs: &VersionSpace) -> Rational {
        let mut groups: [Vec<(Rational, usize)>; 2] = [Vec::new(), Vec::new()];
        let mut none = [false; 2];
        for c in vs.members() {
            let label = self.class.concept(c).label(x) as usize;
            match self.min_cs.nearest_opposite(&self.class, c, x) {
                Some(r) => groups[label].push((r, c)),
                None => none[label] = true,
            }
        }
        let per_label: Vec<Candidates> = (0..2)
            .map(|label| {
                let group = &mut groups[label];
                group.sort();
                let mut radii: Vec<Rational> = group.iter().map(|&(r, _)| r).collect();
                radii.dedup();
                let agree = radii
                    .iter()
                    .map(|&r| self.shared_contrast(x, label == 1, r, group.iter().filter(|g| g.0 == r).map(|g| g.1)))
                    .collect();
                Candidates { radii, agree, none: none[label] }
            })
            .collect();
        let held = self.held.map(|(_, d)| d);
        let mut options: Vec<Rational> = per_label.iter().flat_map(|s| s.radii.iter().copied()).collect();
        options.sort();
        options.dedup();
        let mut memo = HashMap::new();
        let mut best: Option<(usize, Rational)> = None;
        for &r in &options {
            let mut worst = 0;
            for (label, cands) in per_label.iter().enumerate() {
                if cands.radii.is_empty() && !cands.none {
                    continue;
                }
                let wit = held.is_some() && held == cands.radii.last().copied();
                worst = worst.max(search_after(cands, wit, r, label, &mut memo));
            }
            if best.map_or(true, |(b, _)| 1 + worst < b) {
                best = Some((1 + worst, r));
            }
        }
        best.map(|(_, r)| r).unwrap_or_else(|| Rational::from_integer(0))
    }

    /// Whether the given concepts with label `label` at `x` share an
    /// opposite-label instance at distance `r`.
    fn shared_contrast(&self, x: usize, label: bool, r: Rational, members: impl Iterator<Item = usize>) -> bool {
        let mut common: Vec<usize> = (0..self.class.n()).filter(|&p| self.metric.fixed(x, p) == r).collect();
        for c in members {
            let concept = self.class.concept(c);
            common.retain(|&p| concept.label(p) != label);
        }
        !common.is_empty()
    }
}

/// Nearest-opposite distances of one label's concepts, whether those at
/// each distance share a contrastive example, and whether some concept has
/// no opposite instance at all.
struct Candidates {
    radii: Vec<Rational>,
    agree: Vec<bool>,
    none: bool,
}

type SearchKey = (usize, usize, usize, bool, bool);

/// Worst-case remaining cost after querying radius `r` for one label.
fn search_after(cands: &Candidates, wit: bool, r: Rational, label: usize, memo: &mut HashMap<SearchKey, usize>) -> usize {
    let len = cands.radii.len();
    let split = cands.radii.partition_point(|&c| c <= r);
    let mut worst = 0;
    if split > 0 {
        worst = worst.max(search_cost(cands, 0, split, false, true, label, memo));
    }
    if split < len || cands.none {
        worst = worst.max(search_cost(cands, split, len, cands.none, wit, label, memo));
    }
    worst
}

/// Queries needed to pin the nearest-opposite distance among
/// `radii[lo..hi]` (plus "no opposite instance" when `none`), where `wit`
/// says a contrastive example at distance `radii[hi - 1]` is already held.
fn search_cost(
    cands: &Candidates,
    lo: usize,
    hi: usize,
    none: bool,
    wit: bool,
    label: usize,
    memo: &mut HashMap<SearchKey, usize>,
) -> usize {
    let count = hi - lo + none as usize;
    if count <= 1 {
        return if hi > lo && !wit && !cands.agree[lo] { 1 } else { 0 };
    }
    let key = (lo, hi, label, none, wit);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut best = usize::MAX;
    for j in lo..hi {
        if j + 1 == hi && wit && !none {
            continue;
        }
        let mut worst = search_cost(cands, lo, j + 1, false, true, label, memo);
        if j + 1 < hi || none {
            worst = worst.max(search_cost(cands, j + 1, hi, none, wit, label, memo));
        }
        best = best.min(1 + worst);
    }
    memo.insert(key, best);
    best
}

impl<L: Learner> Learner for ProxFromMin<L> {
    fn next_query(&mut self, vs: &VersionSpace) -> Result<Option<Query>> {
        loop {
            let x = match self.pending {
                Some(x) => x,
                None => match self.inner.next_query(&self.inner_vs)? {
                    None => return Ok(None),
                    Some(q) => {
                        self.pending = Some(q.point);
                        self.held = None;
                        self.per_inner.push(0);
                        q.point
                    }
                },
            };
            if let Some(answer) = self.forwardable(x, vs) {
                let q = Query::at(x);
                self.inner_vs = restrict_version_space(&self.inner_vs, &q, &answer, self.min_cs.as_ref(), self.inner_round);
                self.inner_round += 1;
                self.pending = None;
                self.inner.observe(&q, &answer, &self.inner_vs)?;
                continue;
            }
            let r = self.choose_radius(x, vs);
            if let Some(c) = self.per_inner.last_mut() {
                *c += 1;
            }
            return Ok(Some(Query::within(x, r)));
        }
    }

    fn observe(&mut self, query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        if let Contrast::Point { x, .. } = answer.contrast {
            let d = self.metric.fixed(query.point, x);
            if self.held.map_or(true, |(_, h)| d < h) {
                self.held = Some((x, d));
            }
        }
        Ok(())
    }

    fn hypothesis(&self) -> Option<Concept> {
        self.inner.hypothesis()
    }
}
