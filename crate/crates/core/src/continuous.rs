//! Thresholds `1{x <= theta}` on `[0, 1]` and axis-aligned rectangles in
//! `[0, 1]^k`, both under the l1 distance.
//!
//! Oracles return the limit point of a sequence of opposite-label
//! instances when the opposite region is open, so a returned boundary point
//! may carry the query's own label. Targets in tests are dyadic and every
//! `eps` is a power of two, so all comparisons below are exact in `f64`.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DYADIC_BITS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub theta: f64,
}

impl Threshold {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("threshold {} outside [0, 1]", theta)));
        }
        Ok(Threshold { theta })
    }

    pub fn label(&self, x: f64) -> bool {
        x <= self.theta
    }

    /// Measure of the symmetric difference.
    pub fn error(&self, other: &Threshold) -> f64 {
        (self.theta - other.theta).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl Rectangle {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        let ok = low.len() == high.len()
            && !low.is_empty()
            && low.iter().zip(&high).all(|(&l, &h)| 0.0 <= l && l <= h && h <= 1.0);
        if !ok {
            return Err(Error::InvalidParameter("rectangle corners must satisfy 0 <= low <= high <= 1".into()));
        }
        Ok(Rectangle { low, high })
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().enumerate().all(|(i, &v)| self.low[i] <= v && v <= self.high[i])
    }

    pub fn volume(&self) -> f64 {
        self.low.iter().zip(&self.high).map(|(l, h)| h - l).product()
    }

    pub fn intersection_volume(&self, other: &Rectangle) -> f64 {
        (0..self.dim())
            .map(|i| (self.high[i].min(other.high[i]) - self.low[i].max(other.low[i])).max(0.0))
            .product()
    }

    /// Measure of the symmetric difference.
    pub fn error(&self, other: &Rectangle) -> f64 {
        self.volume() + other.volume() - 2.0 * self.intersection_volume(other)
    }

    /// The point of the rectangle nearest to `q`.
    pub fn clamp(&self, q: &[f64]) -> Vec<f64> {
        q.iter().enumerate().map(|(i, &v)| v.clamp(self.low[i], self.high[i])).collect()
    }
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// How the simulated oracle picks among admissible contrastive points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adversary {
    /// The admissible point farthest from the query.
    Farthest,
    /// The admissible point nearest to the query.
    Nearest,
    /// A seeded random admissible dyadic point.
    Random(u64),
    /// No fixed target: every answer keeps the larger half of the
    /// thresholds still consistent. Thresholds only.
    Halving,
}

impl Adversary {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "farthest" => Ok(Adversary::Farthest),
            "nearest" => Ok(Adversary::Nearest),
            "halving" => Ok(Adversary::Halving),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(Adversary::Random)
                    .map_err(|_| Error::InvalidParameter(format!("bad adversary seed {:?}", seed))),
                None => Err(Error::InvalidParameter(format!("unknown adversary {:?}", s))),
            },
        }
    }

    fn rng(&self) -> Xoshiro256PlusPlus {
        match self {
            Adversary::Random(seed) => Xoshiro256PlusPlus::seed_from_u64(*seed),
            _ => Xoshiro256PlusPlus::seed_from_u64(0),
        }
    }
}

fn dyadic_between(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    let steps = 1u64 << DYADIC_BITS;
    lo + (hi - lo) * (rng.gen_range(0..=steps) as f64 / steps as f64)
}

pub fn random_dyadic(rng: &mut impl Rng) -> f64 {
    dyadic_between(rng, 0.0, 1.0)
}

pub fn random_threshold(rng: &mut impl Rng) -> Threshold {
    Threshold { theta: random_dyadic(rng) }
}

pub fn random_rectangle(k: usize, rng: &mut impl Rng) -> Rectangle {
    let (low, high) = (0..k)
        .map(|_| {
            let (a, b) = (random_dyadic(rng), random_dyadic(rng));
            (a.min(b), a.max(b))
        })
        .unzip();
    Rectangle { low, high }
}

/// Simulated threshold oracle answering membership, minimum-distance and
/// proximity queries, counting every call.
pub struct ThresholdOracle {
    target: Threshold,
    adversary: Adversary,
    rng: Xoshiro256PlusPlus,
    consistent: (f64, f64),
    queries: usize,
}

impl ThresholdOracle {
    pub fn new(target: Threshold, adversary: Adversary) -> Self {
        ThresholdOracle { target, adversary, rng: adversary.rng(), consistent: (0.0, 1.0), queries: 0 }
    }

    /// An oracle without a target, answering adaptively.
    pub fn halving() -> Self {
        Self::new(Threshold { theta: 0.5 }, Adversary::Halving)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    /// Thresholds consistent with the answers so far (halving only).
    pub fn consistent(&self) -> (f64, f64) {
        self.consistent
    }

    /// The consistent target farthest from `estimate` for the halving
    /// adversary, the fixed target otherwise.
    pub fn worst_target(&self, estimate: f64) -> Threshold {
        if self.adversary != Adversary::Halving {
            return self.target;
        }
        let (a, b) = self.consistent;
        Threshold { theta: if (estimate - a).abs() >= (b - estimate).abs() { a } else { b } }
    }

    pub fn membership(&mut self, x: f64) -> bool {
        self.queries += 1;
        if self.adversary == Adversary::Halving {
            let (a, b) = self.consistent;
            let label = if x <= a {
                true
            } else if x > b {
                false
            } else {
                b - x >= x - a
            };
            self.consistent = if label { (x.max(a), b) } else { (a, x.min(b)) };
            return label;
        }
        self.target.label(x)
    }

    /// Label and contrastive point (`None` for the dummy answer).
    pub fn min_query(&mut self, x: f64) -> (bool, Option<f64>) {
        if self.adversary == Adversary::Halving {
            let (a, b) = self.consistent;
            self.target = Threshold { theta: (a + b) / 2.0 };
            self.consistent = (self.target.theta, self.target.theta);
        }
        self.queries += 1;
        let theta = self.target.theta;
        let label = self.target.label(x);
        (label, if label && theta >= 1.0 { None } else { Some(theta) })
    }

    /// Proximity query `(x, r)`.
    pub fn prox_query(&mut self, x: f64, r: f64) -> (bool, Option<f64>) {
        if self.adversary == Adversary::Halving {
            return self.halving_prox(x, r);
        }
        self.queries += 1;
        let theta = self.target.theta;
        let label = self.target.label(x);
        let (lo, hi) = if label {
            if theta >= 1.0 || x + r < theta {
                return (label, None);
            }
            (theta, (x + r).min(1.0))
        } else {
            if x - r > theta {
                return (label, None);
            }
            ((x - r).max(0.0), theta)
        };
        let near = if label { lo } else { hi };
        let far = if label { hi } else { lo };
        let point = match self.adversary {
            Adversary::Nearest => near,
            Adversary::Farthest | Adversary::Halving => far,
            Adversary::Random(_) => dyadic_between(&mut self.rng, lo, hi),
        };
        (label, Some(point))
    }

    fn halving_prox(&mut self, x: f64, r: f64) -> (bool, Option<f64>) {
        let label = self.membership(x);
        let (a, b) = self.consistent;
        if label {
            let reach = (x + r).min(1.0);
            let found = reach >= b || (reach >= a && reach - a >= b - reach);
            if found {
                self.consistent = (a, reach.min(b));
                (true, Some(reach))
            } else {
                self.consistent = (reach.max(a), b);
                (true, None)
            }
        } else {
            let reach = (x - r).max(0.0);
            let found = reach <= a || (reach <= b && b - reach >= reach - a);
            if found {
                self.consistent = (reach.max(a), b);
                (false, Some(reach))
            } else {
                self.consistent = (a, reach.min(b));
                (false, None)
            }
        }
    }
}

/// Simulated rectangle oracle.
pub struct RectOracle {
    target: Rectangle,
    adversary: Adversary,
    rng: Xoshiro256PlusPlus,
    queries: usize,
}

impl RectOracle {
    pub fn new(target: Rectangle, adversary: Adversary) -> Result<Self> {
        if adversary == Adversary::Halving {
            return Err(Error::InvalidParameter("the halving adversary is defined for thresholds only".into()));
        }
        Ok(RectOracle { target, rng: adversary.rng(), adversary, queries: 0 })
    }

    pub fn target(&self) -> &Rectangle {
        &self.target
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn membership(&mut self, x: &[f64]) -> bool {
        self.queries += 1;
        self.target.contains(x)
    }

    /// Boundary point of the nearest exit from the rectangle, if the
    /// rectangle does not cover the whole cube.
    fn nearest_exit(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let t = &self.target;
        let mut best: Option<(f64, usize, f64)> = None;
        for i in 0..t.dim() {
            if t.low[i] > 0.0 && best.map_or(true, |b| x[i] - t.low[i] < b.0) {
                best = Some((x[i] - t.low[i], i, t.low[i]));
            }
            if t.high[i] < 1.0 && best.map_or(true, |b| t.high[i] - x[i] < b.0) {
                best = Some((t.high[i] - x[i], i, t.high[i]));
            }
        }
        best.map(|(d, i, v)| {
            let mut p = x.to_vec();
            p[i] = v;
            (d, p)
        })
    }

    pub fn min_query(&mut self, x: &[f64]) -> (bool, Option<Vec<f64>>) {
        self.queries += 1;
        if self.target.contains(x) {
            (true, self.nearest_exit(x).map(|(_, p)| p))
        } else {
            (false, Some(self.target.clamp(x)))
        }
    }

    pub fn prox_query(&mut self, x: &[f64], r: f64) -> (bool, Option<Vec<f64>>) {
        self.queries += 1;
        if self.target.contains(x) {
            return match self.nearest_exit(x) {
                Some((d, p)) if d <= r => (true, Some(p)),
                _ => (true, None),
            };
        }
        let near = self.target.clamp(x);
        let dist = l1(&near, x);
        if dist > r {
            return (false, None);
        }
        let budget = match self.adversary {
            Adversary::Nearest => 0.0,
            Adversary::Farthest | Adversary::Halving => r - dist,
            Adversary::Random(_) => dyadic_between(&mut self.rng, 0.0, r - dist),
        };
        let mut order: Vec<usize> = (0..x.len()).collect();
        if let Adversary::Random(_) = self.adversary {
            for i in (1..order.len()).rev() {
                order.swap(i, self.rng.gen_range(0..=i));
            }
        }
        (false, Some(self.push_away(x, near, budget, &order)))
    }

    /// Move `p` away from `x` inside the rectangle by l1 length `budget`.
    fn push_away(&self, x: &[f64], mut p: Vec<f64>, mut budget: f64, order: &[usize]) -> Vec<f64> {
        let t = &self.target;
        for &i in order {
            if budget <= 0.0 {
                break;
            }
            let (room, dir) = if x[i] <= p[i] { (t.high[i] - p[i], 1.0) } else { (p[i] - t.low[i], -1.0) };
            let step = room.min(budget);
            p[i] += dir * step;
            budget -= step;
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Run<E> {
    pub estimate: E,
    pub queries: usize,
    pub error: f64,
}

/// One minimum-distance query at 0: the contrastive example is the threshold.
pub fn threshold_min_learner(oracle: &mut ThresholdOracle) -> Run<Threshold> {
    let (_, contrast) = oracle.min_query(0.0);
    let estimate = Threshold { theta: contrast.unwrap_or(1.0) };
    let error = oracle.worst_target(estimate.theta).error(&estimate);
    Run { estimate, queries: oracle.queries(), error }
}

/// Binary search on the radius around 0 until the window is at most `eps`.
pub fn threshold_prox_learner(oracle: &mut ThresholdOracle, eps: f64) -> Run<Threshold> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut asked = false;
    while !asked || hi - lo > eps {
        asked = true;
        let r = (lo + hi) / 2.0;
        match oracle.prox_query(0.0, r) {
            (_, Some(p)) => hi = hi.min(p),
            (_, None) => lo = r,
        }
    }
    let estimate = Threshold { theta: hi };
    let error = oracle.worst_target(hi).error(&estimate);
    Run { estimate, queries: oracle.queries(), error }
}

/// Plain bisection with membership queries.
pub fn threshold_baseline_learner(oracle: &mut ThresholdOracle, eps: f64) -> Run<Threshold> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut asked = false;
    while !asked || hi - lo > eps {
        asked = true;
        let mid = (lo + hi) / 2.0;
        if oracle.membership(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let estimate = Threshold { theta: lo };
    let error = oracle.worst_target(lo).error(&estimate);
    Run { estimate, queries: oracle.queries(), error }
}

pub fn threshold_prox_budget(eps: f64) -> usize {
    log2_ceil(1.0 / eps) + 2
}

pub fn threshold_baseline_budget(eps: f64) -> usize {
    log2_ceil(1.0 / eps).max(1)
}

/// Queries at the two opposite cube corners; contrastive examples are the
/// rectangle corners.
pub fn rect_min_learner(oracle: &mut RectOracle) -> Run<Rectangle> {
    let k = oracle.target().dim();
    let corner = |oracle: &mut RectOracle, q: Vec<f64>| match oracle.min_query(&q) {
        (true, _) => q,
        (false, p) => p.expect("an outside query always has a nearest point"),
    };
    let low = corner(oracle, vec![0.0; k]);
    let high = corner(oracle, vec![1.0; k]);
    finish_rect(oracle, low, high)
}

/// Radius search from both opposite corners until the held contrastive
/// example is within `eps / 2` of the nearest rectangle corner.
pub fn rect_prox_learner(oracle: &mut RectOracle, eps: f64) -> Run<Rectangle> {
    let k = oracle.target().dim();
    let low = corner_search(oracle, vec![0.0; k], eps / 2.0);
    let high = corner_search(oracle, vec![1.0; k], eps / 2.0);
    finish_rect(oracle, low, high)
}

fn corner_search(oracle: &mut RectOracle, q: Vec<f64>, window: f64) -> Vec<f64> {
    let mut lo = 0.0f64;
    let mut held: Option<(Vec<f64>, f64)> = None;
    loop {
        let upper = held.as_ref().map_or(q.len() as f64, |h| h.1);
        let narrow = upper - lo <= window;
        if narrow {
            if let Some((p, _)) = held {
                return p;
            }
        }
        let r = if narrow { upper } else { (lo + upper) / 2.0 };
        match oracle.prox_query(&q, r) {
            (true, _) => return q,
            (false, None) => lo = r,
            (false, Some(p)) => {
                let d = l1(&p, &q);
                if held.as_ref().map_or(true, |h| d < h.1) {
                    held = Some((p, d));
                }
            }
        }
    }
}

fn finish_rect(oracle: &RectOracle, mut low: Vec<f64>, mut high: Vec<f64>) -> Run<Rectangle> {
    for i in 0..low.len() {
        if low[i] > high[i] {
            let mid = (low[i] + high[i]) / 2.0;
            low[i] = mid;
            high[i] = mid;
        }
    }
    let estimate = Rectangle { low, high };
    let error = oracle.target().error(&estimate);
    Run { estimate, queries: oracle.queries(), error }
}

/// Membership bisection along every axis from a given positive seed, each
/// face to precision `eps / 2k`.
pub fn rect_baseline_learner(oracle: &mut RectOracle, seed: &[f64], eps: f64) -> Run<Rectangle> {
    let k = seed.len();
    let precision = eps / (2 * k) as f64;
    let mut low = seed.to_vec();
    let mut high = seed.to_vec();
    for i in 0..k {
        for towards_zero in [true, false] {
            let (mut inside, mut outside) = (seed[i], if towards_zero { 0.0 } else { 1.0 });
            while (inside - outside).abs() > precision {
                let mid = (inside + outside) / 2.0;
                let mut p = seed.to_vec();
                p[i] = mid;
                if oracle.membership(&p) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            if towards_zero {
                low[i] = inside;
            } else {
                high[i] = inside;
            }
        }
    }
    finish_rect(oracle, low, high)
}

pub fn rect_prox_budget(k: usize, eps: f64) -> usize {
    2 * (log2_ceil(2.0 * k as f64 / eps) + 1)
}

pub fn rect_baseline_budget(k: usize, eps: f64) -> usize {
    2 * k * log2_ceil(2.0 * k as f64 / eps)
}

fn log2_ceil(v: f64) -> usize {
    if v <= 1.0 {
        0
    } else {
        v.log2().ceil() as usize
    }
}

/// Queries the halving adversary forces from the threshold proximity learner.
pub fn halving_forcing(eps: f64) -> usize {
    let mut oracle = ThresholdOracle::halving();
    threshold_prox_learner(&mut oracle, eps).queries
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Setting {
    Thresholds,
    Rectangles { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    Baseline,
    Prox,
    Min,
}

impl Model {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "baseline" | "none" => Ok(Model::Baseline),
            "prox" => Ok(Model::Prox),
            "min" => Ok(Model::Min),
            _ => Err(Error::InvalidParameter(format!("unknown model {:?}", s))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Baseline => "baseline",
            Model::Prox => "prox",
            Model::Min => "min",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub trial: usize,
    pub queries: usize,
    pub error: f64,
}

/// Run `trials` seeded random targets through one learner.
pub fn run_trials(setting: Setting, model: Model, eps: f64, trials: usize, seed: u64, adversary: Adversary) -> Result<Vec<Trial>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let (queries, error) = match setting {
            Setting::Thresholds => {
                let mut oracle = match adversary {
                    Adversary::Halving => ThresholdOracle::halving(),
                    _ => ThresholdOracle::new(random_threshold(&mut rng), adversary),
                };
                let run = match model {
                    Model::Baseline => threshold_baseline_learner(&mut oracle, eps),
                    Model::Prox => threshold_prox_learner(&mut oracle, eps),
                    Model::Min => threshold_min_learner(&mut oracle),
                };
                (run.queries, run.error)
            }
            Setting::Rectangles { k } => {
                if k == 0 {
                    return Err(Error::InvalidParameter("rectangles need k >= 1".into()));
                }
                let target = random_rectangle(k, &mut rng);
                let seed_point: Vec<f64> = (0..k).map(|i| (target.low[i] + target.high[i]) / 2.0).collect();
                let mut oracle = RectOracle::new(target, adversary)?;
                let run = match model {
                    Model::Baseline => rect_baseline_learner(&mut oracle, &seed_point, eps),
                    Model::Prox => rect_prox_learner(&mut oracle, eps),
                    Model::Min => rect_min_learner(&mut oracle),
                };
                (run.queries, run.error)
            }
        };
        out.push(Trial { trial, queries, error });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub setting: String,
    pub model: String,
    pub eps_exponent: u32,
    pub max_queries: usize,
    pub mean_queries: f64,
    pub max_error: f64,
}

/// Measured query counts for thresholds and `k`-dimensional rectangles
/// under every model at `eps = 2^-b` for each `b` in `exponents`.
pub fn table1(exponents: &[u32], k: usize, trials: usize, seed: u64) -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for (setting, label) in [(Setting::Thresholds, "thresholds".to_string()), (Setting::Rectangles { k }, format!("rectangles k={}", k))] {
        for model in [Model::Baseline, Model::Prox, Model::Min] {
            for &b in exponents {
                let eps = 2f64.powi(-(b as i32));
                let runs = run_trials(setting, model, eps, trials, seed, Adversary::Farthest)?;
                rows.push(Table1Row {
                    setting: label.clone(),
                    model: model.name().into(),
                    eps_exponent: b,
                    max_queries: runs.iter().map(|r| r.queries).max().unwrap_or(0),
                    mean_queries: runs.iter().map(|r| r.queries as f64).sum::<f64>() / runs.len().max(1) as f64,
                    max_error: runs.iter().map(|r| r.error).fold(0.0, f64::max),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_min_is_exact() {
        let mut o = ThresholdOracle::new(Threshold { theta: 0.375 }, Adversary::Farthest);
        let run = threshold_min_learner(&mut o);
        assert_eq!((run.estimate.theta, run.queries), (0.375, 1));
        let mut o = ThresholdOracle::new(Threshold { theta: 1.0 }, Adversary::Farthest);
        assert_eq!(threshold_min_learner(&mut o).estimate.theta, 1.0);
    }

    #[test]
    fn rect_min_reads_corners() {
        let target = Rectangle::new(vec![0.25, 0.375], vec![0.5, 0.625]).unwrap();
        let mut o = RectOracle::new(target.clone(), Adversary::Farthest).unwrap();
        let run = rect_min_learner(&mut o);
        assert_eq!(run.estimate, target);
        assert_eq!(run.queries, 2);
    }

    #[test]
    fn prox_window() {
        let mut o = ThresholdOracle::new(Threshold { theta: 0.375 }, Adversary::Random(3));
        let run = threshold_prox_learner(&mut o, 1.0 / 32.0);
        assert!(run.error <= 1.0 / 32.0);
        assert!(run.queries <= 7);
    }
}
