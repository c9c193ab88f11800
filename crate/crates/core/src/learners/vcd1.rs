//! A metric under which two minimum-distance queries identify any concept
//! of a class with VC dimension 1.
//!
//! The class is first extended to a maximum class of `n + 1` concepts.
//! Repeatedly removing the unique concept that labels some instance `x_i`
//! with `b_i` gives an ordering `(x_1, b_1, C_1), ..., (x_n, b_n, C_n)`
//! with `C_{n+1}` left over. The metric puts instances with equal bits at
//! their positional distance and everything else at distance `n`.

use std::sync::Arc;

use crate::domain::{Concept, ConceptClass, Rational, VersionSpace};
use crate::error::{Error, Result};
use crate::exact::vcd;
use crate::metrics::{DistanceMatrix, Metric};
use crate::protocol::{Contrast, Learner, OracleAnswer, Query};

const MAX_EXTENSION_DOMAIN: usize = 16;

#[derive(Clone, Debug)]
pub struct Vcd1Construction {
    /// `x_1, ..., x_n` as instance indices.
    pub order: Vec<usize>,
    /// `b_1, ..., b_n`.
    pub bits: Vec<bool>,
    /// `C_1, ..., C_{n+1}` of the extended class.
    pub concepts: Vec<Concept>,
    pub metric: Metric,
}

impl Vcd1Construction {
    /// Position `i` (zero-based) of each instance in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }
}

pub fn vcd1_metric(class: &ConceptClass) -> Result<Vcd1Construction> {
    let n = class.n();
    if vcd(class) != 1 {
        return Err(Error::NotVcdOne);
    }
    if n > MAX_EXTENSION_DOMAIN {
        return Err(Error::CapExceeded(format!("VC-1 extension supports at most {} instances", MAX_EXTENSION_DOMAIN)));
    }
    let concepts = extend_to_maximum(class)?;
    let (order, bits, ordered) = eliminate(&concepts, n)?;
    let mut pos = vec![0usize; n];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let matrix = DistanceMatrix::from_fn(n, |x, y| {
        if x == y {
            Rational::from_integer(0)
        } else if bits[pos[x]] == bits[pos[y]] {
            Rational::from_integer((pos[x] as i64 - pos[y] as i64).abs())
        } else {
            Rational::from_integer(n as i64)
        }
    })?;
    Ok(Vcd1Construction { order, bits, concepts: ordered, metric: Metric::matrix(matrix) })
}

/// Patterns seen on every instance pair; a pair with all four is shattered.
fn add_patterns(patterns: &mut [u8], c: &Concept, n: usize) -> bool {
    let mut ok = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = &mut patterns[i * n + j];
            *p |= 1 << (2 * c.label(i) as u8 + c.label(j) as u8);
            ok &= *p != 0b1111;
        }
    }
    ok
}

fn extend_to_maximum(class: &ConceptClass) -> Result<Vec<Concept>> {
    let n = class.n();
    let mut patterns = vec![0u8; n * n];
    for c in class.concepts() {
        add_patterns(&mut patterns, c, n);
    }
    let candidates: Vec<Concept> = (0..(1usize << n))
        .map(|code| Concept::from_fn(n, |x| code >> x & 1 == 1))
        .filter(|c| !class.contains(c))
        .collect();
    let mut chosen: Vec<Concept> = class.concepts().to_vec();
    if extend_dfs(&mut chosen, &patterns, &candidates, 0, n) {
        Ok(chosen)
    } else {
        Err(Error::OrderingNotFound)
    }
}

fn extend_dfs(chosen: &mut Vec<Concept>, patterns: &[u8], candidates: &[Concept], start: usize, n: usize) -> bool {
    if chosen.len() == n + 1 {
        return true;
    }
    for k in start..candidates.len() {
        let mut next = patterns.to_vec();
        if !add_patterns(&mut next, &candidates[k], n) {
            continue;
        }
        chosen.push(candidates[k].clone());
        if extend_dfs(chosen, &next, candidates, k + 1, n) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Lowest instance first, then label 0 before label 1.
fn eliminate(concepts: &[Concept], n: usize) -> Result<(Vec<usize>, Vec<bool>, Vec<Concept>)> {
    let mut remaining: Vec<usize> = (0..concepts.len()).collect();
    let mut free = vec![true; n];
    let (mut order, mut bits, mut ordered) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let found = (0..n).filter(|&x| free[x]).find_map(|x| {
            [false, true].into_iter().find_map(|b| {
                let hits: Vec<usize> = remaining.iter().copied().filter(|&c| concepts[c].label(x) == b).collect();
                (hits.len() == 1).then(|| (x, b, hits[0]))
            })
        });
        let (x, b, c) = found.ok_or(Error::OrderingNotFound)?;
        free[x] = false;
        order.push(x);
        bits.push(b);
        ordered.push(concepts[c].clone());
        remaining.retain(|&r| r != c);
    }
    if remaining.len() != 1 {
        return Err(Error::OrderingNotFound);
    }
    ordered.push(concepts[remaining[0]].clone());
    Ok((order, bits, ordered))
}

/// Queries the first instance with bit 1 and the first with bit 0 in the
/// ordering, infers labels from the answers, and decodes the target.
#[derive(Clone, Debug)]
pub struct Vcd1Learner {
    cons: Arc<Vcd1Construction>,
    queries: Vec<usize>,
    knowledge: Vec<Option<bool>>,
    asked: usize,
    hypothesis: Option<Concept>,
}

impl Vcd1Learner {
    pub fn new(cons: Arc<Vcd1Construction>) -> Self {
        let n = cons.order.len();
        let first = |b: bool| cons.bits.iter().position(|&v| v == b).map(|i| cons.order[i]);
        let queries = [first(true), first(false)].into_iter().flatten().collect();
        Vcd1Learner { cons, queries, knowledge: vec![None; n], asked: 0, hypothesis: None }
    }

    fn learn(&mut self, x: usize, label: bool) -> Result<()> {
        match self.knowledge[x] {
            Some(l) if l != label => {
                Err(Error::InconsistentOracle(format!("instance {} seen with both labels", x)))
            }
            _ => {
                self.knowledge[x] = Some(label);
                Ok(())
            }
        }
    }

    /// The target is `C_k` for the least `k` with `C(x_k) = b_k`, or
    /// `C_{n+1}` when there is none. Decodes once the labels known so far
    /// determine `k`.
    fn decode(&self) -> Option<usize> {
        for (i, &x) in self.cons.order.iter().enumerate() {
            match self.knowledge[x] {
                None => return None,
                Some(v) if v == self.cons.bits[i] => return Some(i),
                Some(_) => {}
            }
        }
        Some(self.cons.order.len())
    }
}

impl Learner for Vcd1Learner {
    fn next_query(&mut self, _vs: &VersionSpace) -> Result<Option<Query>> {
        if self.hypothesis.is_some() || self.asked >= self.queries.len() {
            return Ok(None);
        }
        Ok(Some(Query::at(self.queries[self.asked])))
    }

    fn observe(&mut self, query: &Query, answer: &OracleAnswer, _vs: &VersionSpace) -> Result<()> {
        self.asked += 1;
        let q = query.point;
        let n = self.cons.order.len();
        self.learn(q, answer.label)?;
        let reach = match answer.contrast {
            Contrast::Omega => None,
            Contrast::Point { x, label } => {
                self.learn(x, label)?;
                Some(self.cons.metric.fixed(q, x))
            }
        };
        for z in 0..n {
            if reach.map_or(true, |d| self.cons.metric.fixed(q, z) < d) {
                self.learn(z, answer.label)?;
            }
        }
        if let Some(k) = self.decode() {
            self.hypothesis = Some(self.cons.concepts[k].clone());
        } else if self.asked >= self.queries.len() {
            return Err(Error::InconsistentOracle("answers do not determine the target".into()));
        }
        Ok(())
    }

    fn hypothesis(&self) -> Option<Concept> {
        self.hypothesis.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::classes::{gen_parity, vcd1_example};

    #[test]
    fn ordering_of_the_example() {
        let cons = vcd1_metric(&vcd1_example()).unwrap();
        assert_eq!(cons.concepts.len(), 4);
        assert_eq!(cons.order.len(), 3);
        let mut sorted = cons.order.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_higher_dimension() {
        assert_eq!(vcd1_metric(&gen_parity(2, &Caps::default()).unwrap()).unwrap_err(), Error::NotVcdOne);
    }
}
