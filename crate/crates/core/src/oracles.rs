//! Contrast-set functions and oracle strategies.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::domain::{ConceptClass, Rational};
use crate::error::{Error, Result};
use crate::metrics::{spectrum, Metric, MetricEnv};
use crate::protocol::{ChoiceContext, ContrastSet, CsContext, OracleStrategy, Query};

type DistanceTable = Arc<Vec<Option<Rational>>>;

/// Per-class cache of the smallest distance from `x` to an instance with the
/// opposite label, one entry per concept. Only used for static metrics.
#[derive(Default)]
struct MinDistanceCache {
    tables: Mutex<HashMap<(u64, usize), DistanceTable>>,
}

impl MinDistanceCache {
    fn table(&self, metric: &Metric, class: &ConceptClass, x: usize) -> DistanceTable {
        let key = (class.id(), x);
        if let Some(t) = self.tables.lock().expect("cache lock").get(&key) {
            return t.clone();
        }
        let n = class.n();
        let dist: Vec<Rational> = (0..n).map(|y| metric.fixed(x, y)).collect();
        let table: Vec<Option<Rational>> = class
            .concepts()
            .iter()
            .map(|c| {
                let lx = c.label(x);
                (0..n).filter(|&y| c.label(y) != lx).map(|y| dist[y]).min()
            })
            .collect();
        let table = Arc::new(table);
        self.tables.lock().expect("cache lock").insert(key, table.clone());
        table
    }
}

fn min_opposite(metric: &Metric, cache: &MinDistanceCache, ctx: &CsContext, x: usize) -> Option<Rational> {
    if metric.is_static() {
        return cache.table(metric, ctx.class, x)[ctx.concept];
    }
    let env = MetricEnv { vs: Some(ctx.vs), round: ctx.round };
    let c = ctx.class.concept(ctx.concept);
    let lx = c.label(x);
    (0..ctx.class.n()).filter(|&y| c.label(y) != lx).map(|y| metric.distance(x, y, &env)).min()
}

/// `CS_min`: the opposite-labelled instances nearest to the query.
pub struct CsMin {
    metric: Metric,
    cache: MinDistanceCache,
}

impl CsMin {
    pub fn new(metric: Metric) -> Self {
        CsMin { metric, cache: MinDistanceCache::default() }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Distance from `x` to the nearest instance labelled differently by
    /// concept `concept` of `class`, for a static metric.
    pub fn nearest_opposite(&self, class: &ConceptClass, concept: usize, x: usize) -> Option<Rational> {
        assert!(self.metric.is_static(), "nearest_opposite needs a static metric");
        self.cache.table(&self.metric, class, x)[concept]
    }
}

impl ContrastSet for CsMin {
    fn name(&self) -> String {
        format!("min:{}", self.metric.name())
    }

    fn contrast_set(&self, query: &Query, ctx: &CsContext) -> Vec<usize> {
        let x = query.point;
        let Some(r) = min_opposite(&self.metric, &self.cache, ctx, x) else {
            return Vec::new();
        };
        let env = MetricEnv { vs: Some(ctx.vs), round: ctx.round };
        let c = ctx.class.concept(ctx.concept);
        let lx = c.label(x);
        (0..ctx.class.n())
            .filter(|&y| c.label(y) != lx && self.metric.distance(x, y, &env) == r)
            .collect()
    }

    fn admits(&self, query: &Query, ctx: &CsContext, y: usize) -> bool {
        let x = query.point;
        let c = ctx.class.concept(ctx.concept);
        if c.label(y) == c.label(x) {
            return false;
        }
        let env = MetricEnv { vs: Some(ctx.vs), round: ctx.round };
        Some(self.metric.distance(x, y, &env)) == min_opposite(&self.metric, &self.cache, ctx, x)
    }

    fn is_empty_for(&self, _query: &Query, ctx: &CsContext) -> bool {
        ctx.class.concept(ctx.concept).constant_value().is_some()
    }

    fn depends_on_vs(&self) -> bool {
        self.metric.depends_on_vs()
    }

    fn depends_on_round(&self) -> bool {
        self.metric.depends_on_round()
    }
}

/// `CS_prox`: every opposite-labelled instance within the query radius.
pub struct CsProx {
    metric: Metric,
    cache: MinDistanceCache,
}

impl CsProx {
    pub fn new(metric: Metric) -> Result<Self> {
        if !metric.is_static() {
            return Err(Error::InvalidMetric(format!("proximity model needs a static metric, got {}", metric.name())));
        }
        Ok(CsProx { metric, cache: MinDistanceCache::default() })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }
}

impl ContrastSet for CsProx {
    fn name(&self) -> String {
        format!("prox:{}", self.metric.name())
    }

    fn contrast_set(&self, query: &Query, ctx: &CsContext) -> Vec<usize> {
        let x = query.point;
        let r = query.radius.unwrap_or_default();
        let c = ctx.class.concept(ctx.concept);
        let lx = c.label(x);
        (0..ctx.class.n())
            .filter(|&y| c.label(y) != lx && self.metric.fixed(x, y) <= r)
            .collect()
    }

    fn admits(&self, query: &Query, ctx: &CsContext, y: usize) -> bool {
        let c = ctx.class.concept(ctx.concept);
        c.label(y) != c.label(query.point) && self.metric.fixed(query.point, y) <= query.radius.unwrap_or_default()
    }

    fn is_empty_for(&self, query: &Query, ctx: &CsContext) -> bool {
        match min_opposite(&self.metric, &self.cache, ctx, query.point) {
            None => true,
            Some(d) => d > query.radius.unwrap_or_default(),
        }
    }

    fn uses_radius(&self) -> bool {
        true
    }

    fn radius_options(&self, class: &ConceptClass, x: usize) -> Vec<Rational> {
        let mut r = vec![Rational::from_integer(0)];
        r.extend(spectrum(&self.metric, class.n(), x));
        r.dedup();
        r
    }
}

/// The empty contrast set: every answer is omega, leaving membership
/// queries.
pub struct NoContrast;

impl ContrastSet for NoContrast {
    fn name(&self) -> String {
        "none".into()
    }

    fn contrast_set(&self, _query: &Query, _ctx: &CsContext) -> Vec<usize> {
        Vec::new()
    }

    fn admits(&self, _query: &Query, _ctx: &CsContext, _x: usize) -> bool {
        false
    }

    fn is_empty_for(&self, _query: &Query, _ctx: &CsContext) -> bool {
        true
    }
}

/// Contrast sets built from an injective map `T` from concepts to instance
/// sets: querying the instance at enumeration position `i` returns the
/// first element of `T(C)` at position `i` or later.
pub struct CsInjective {
    enumeration: Vec<usize>,
    position: Vec<usize>,
    images: Vec<Vec<usize>>,
}

impl CsInjective {
    /// `images[c]` lists the instances of `T(C_c)`. The map must be
    /// injective.
    pub fn new(class: &ConceptClass, enumeration: Vec<usize>, images: Vec<Vec<usize>>) -> Result<Self> {
        let n = class.n();
        let mut sorted = enumeration.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter("enumeration must list every instance once".into()));
        }
        if images.len() != class.len() {
            return Err(Error::InvalidParameter(format!(
                "{} images for a class of {} concepts",
                images.len(),
                class.len()
            )));
        }
        let mut position = vec![0; n];
        for (p, &x) in enumeration.iter().enumerate() {
            position[x] = p;
        }
        let mut pos_images: Vec<Vec<usize>> = Vec::with_capacity(images.len());
        for img in &images {
            if let Some(&bad) = img.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidParameter(format!("instance {} outside domain", bad)));
            }
            let mut p: Vec<usize> = img.iter().map(|&x| position[x]).collect();
            p.sort_unstable();
            p.dedup();
            pos_images.push(p);
        }
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (i, img) in pos_images.iter().enumerate() {
            if let Some(j) = seen.insert(img.as_slice(), i) {
                return Err(Error::InvalidParameter(format!("concepts {} and {} have the same image", j, i)));
            }
        }
        Ok(CsInjective { enumeration, position, images: pos_images })
    }

    /// Parse a map file: an optional `enumeration i_0 i_1 ...` line, then
    /// one line per concept listing its image (`-` for the empty set).
    pub fn parse(class: &ConceptClass, text: &str) -> Result<Self> {
        let mut enumeration: Vec<usize> = (0..class.n()).collect();
        let mut images = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_list = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse { line: lineno + 1, msg: format!("bad index `{}`", t) })
                    })
                    .collect()
            };
            if let Some(rest) = line.strip_prefix("enumeration") {
                enumeration = parse_list(rest)?;
            } else if line == "-" {
                images.push(Vec::new());
            } else {
                images.push(parse_list(line)?);
            }
        }
        Self::new(class, enumeration, images)
    }

    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }
}

impl ContrastSet for CsInjective {
    fn name(&self) -> String {
        "injective".into()
    }

    fn contrast_set(&self, query: &Query, ctx: &CsContext) -> Vec<usize> {
        let i = self.position[query.point];
        let img = &self.images[ctx.concept];
        let k = img.partition_point(|&p| p < i);
        img.get(k).map(|&p| vec![self.enumeration[p]]).unwrap_or_default()
    }
}

/// Always the lowest admissible instance.
pub struct FirstByIndex;

impl OracleStrategy for FirstByIndex {
    fn name(&self) -> String {
        "first".into()
    }

    fn choose(&mut self, ctx: &ChoiceContext) -> Result<Option<usize>> {
        Ok(ctx.admissible.first().copied())
    }
}

/// Always the highest admissible instance.
pub struct LastByIndex;

impl OracleStrategy for LastByIndex {
    fn name(&self) -> String {
        "last".into()
    }

    fn choose(&mut self, ctx: &ChoiceContext) -> Result<Option<usize>> {
        Ok(ctx.admissible.last().copied())
    }
}

/// Uniform choice driven by Xoshiro256++ seeded through SplitMix64; the
/// pick is `next_u64() % |admissible|`.
pub struct SeededRandom {
    seed: u64,
    rng: Xoshiro256PlusPlus,
}

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        SeededRandom { seed, rng: Xoshiro256PlusPlus::seed_from_u64(seed) }
    }
}

impl OracleStrategy for SeededRandom {
    fn name(&self) -> String {
        format!("random:seed={}", self.seed)
    }

    fn choose(&mut self, ctx: &ChoiceContext) -> Result<Option<usize>> {
        if ctx.admissible.is_empty() {
            return Ok(None);
        }
        let k = (self.rng.next_u64() % ctx.admissible.len() as u64) as usize;
        Ok(Some(ctx.admissible[k]))
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}
