//! Brute-force reference implementations written from the definitions,
//! sharing no code with the library. Used to derive and freeze expected
//! values.

#![allow(dead_code)]

use std::collections::HashMap;

/// Labels of a concept over `n` points, indexed by instance.
pub type Labels = Vec<bool>;

pub fn bits(x: usize, m: usize) -> Vec<bool> {
    (0..m).map(|i| (x >> (m - 1 - i)) & 1 == 1).collect()
}

pub fn hamming(x: usize, y: usize) -> i64 {
    (x ^ y).count_ones() as i64
}

/// Monotone monomial over the variable set `vars` (zero-based, `v1` first).
pub fn monomial(m: usize, vars: &[usize]) -> Labels {
    (0..1 << m).map(|x| vars.iter().all(|&v| bits(x, m)[v])).collect()
}

pub fn labels_of(s: &str) -> Labels {
    s.chars().map(|c| c == '1').collect()
}

pub fn string_of(l: &Labels) -> String {
    l.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Opposite-labelled points nearest to `x`, distances given as `i64`
/// numerators over a common denominator.
pub fn min_set(c: &Labels, x: usize, d: &dyn Fn(usize, usize) -> i64) -> Vec<usize> {
    let opp: Vec<usize> = (0..c.len()).filter(|&y| c[y] != c[x]).collect();
    let Some(best) = opp.iter().map(|&y| d(x, y)).min() else {
        return Vec::new();
    };
    opp.into_iter().filter(|&y| d(x, y) == best).collect()
}

pub fn prox_set(c: &Labels, x: usize, r: i64, d: &dyn Fn(usize, usize) -> i64) -> Vec<usize> {
    (0..c.len()).filter(|&y| c[y] != c[x] && d(x, y) <= r).collect()
}

/// An answer: query label, then `None` for omega or the contrastive point
/// with its label.
pub type Answer = (bool, Option<(usize, bool)>);

/// Every answer concept `c` admits for a query, given its contrast set.
pub fn answers_for(c: &Labels, x: usize, set: &[usize]) -> Vec<Answer> {
    if set.is_empty() {
        vec![(c[x], None)]
    } else {
        set.iter().map(|&y| (c[x], Some((y, c[y])))).collect()
    }
}

/// Minimax number of rounds for identifying any concept of `class`, where
/// `moves` lists the available queries and `cs(move, concept)` its contrast
/// set (`None` marks a membership-only model). `None` means unbounded.
pub struct Game<'a> {
    pub class: &'a [Labels],
    pub moves: Vec<(usize, i64)>,
    pub cs: &'a dyn Fn(usize, i64, &Labels) -> Option<Vec<usize>>,
    memo: HashMap<Vec<usize>, Option<u32>>,
}

impl<'a> Game<'a> {
    pub fn new(class: &'a [Labels], moves: Vec<(usize, i64)>, cs: &'a dyn Fn(usize, i64, &Labels) -> Option<Vec<usize>>) -> Self {
        Game { class, moves, cs, memo: HashMap::new() }
    }

    pub fn value(&mut self) -> Option<u32> {
        let all: Vec<usize> = (0..self.class.len()).collect();
        self.value_of(all)
    }

    fn value_of(&mut self, vs: Vec<usize>) -> Option<u32> {
        if vs.len() <= 1 {
            return Some(0);
        }
        if let Some(v) = self.memo.get(&vs) {
            return *v;
        }
        let mut best: Option<u32> = None;
        for &(x, r) in &self.moves.clone() {
            let mut branches: HashMap<Answer, Vec<usize>> = HashMap::new();
            for &c in &vs {
                let concept = &self.class[c];
                let ans = match (self.cs)(x, r, concept) {
                    Some(set) => answers_for(concept, x, &set),
                    None => vec![(concept[x], None)],
                };
                for a in ans {
                    branches.entry(a).or_default().push(c);
                }
            }
            if branches.values().any(|b| b.len() == vs.len()) {
                continue;
            }
            let mut worst = Some(0);
            for (_, b) in branches {
                worst = match (worst, self.value_of(b)) {
                    (Some(w), Some(v)) => Some(w.max(v + 1)),
                    _ => None,
                };
            }
            best = match (best, worst) {
                (None, w) => w,
                (Some(b), Some(w)) => Some(b.min(w)),
                (b, None) => b,
            };
        }
        self.memo.insert(vs, best);
        best
    }
}

pub fn mq_value(class: &[Labels]) -> Option<u32> {
    let n = class[0].len();
    let cs = |_: usize, _: i64, _: &Labels| None;
    Game::new(class, (0..n).map(|x| (x, 0)).collect(), &cs).value()
}

pub fn min_value(class: &[Labels], d: &dyn Fn(usize, usize) -> i64) -> Option<u32> {
    let n = class[0].len();
    let cs = |x: usize, _: i64, c: &Labels| Some(min_set(c, x, d));
    Game::new(class, (0..n).map(|x| (x, 0)).collect(), &cs).value()
}

/// Proximity game with every radius in the distance spectrum of each point
/// plus radius 0.
pub fn prox_value(class: &[Labels], d: &dyn Fn(usize, usize) -> i64) -> Option<u32> {
    let n = class[0].len();
    let mut moves = Vec::new();
    for x in 0..n {
        let mut radii: Vec<i64> = (0..n).map(|y| d(x, y)).collect();
        radii.sort();
        radii.dedup();
        moves.extend(radii.into_iter().map(|r| (x, r)));
    }
    let cs = |x: usize, r: i64, c: &Labels| Some(prox_set(c, x, r, d));
    Game::new(class, moves, &cs).value()
}

/// Self-directed complexity: the learner picks an unlabelled point and a
/// prediction, the adversary picks a label consistent with some remaining
/// concept.
pub fn sd_value(class: &[Labels]) -> u32 {
    fn go(class: &[Labels], vs: Vec<usize>, done: u64, memo: &mut HashMap<(Vec<usize>, u64), u32>) -> u32 {
        if vs.len() <= 1 {
            return 0;
        }
        if let Some(&v) = memo.get(&(vs.clone(), done)) {
            return v;
        }
        let n = class[0].len();
        let mut best = u32::MAX;
        for x in 0..n {
            if done >> x & 1 == 1 {
                continue;
            }
            for pred in [false, true] {
                let mut worst = 0;
                for label in [false, true] {
                    let next: Vec<usize> = vs.iter().copied().filter(|&c| class[c][x] == label).collect();
                    if next.is_empty() {
                        continue;
                    }
                    let v = go(class, next, done | 1 << x, memo) + (label != pred) as u32;
                    worst = worst.max(v);
                }
                best = best.min(worst);
            }
        }
        memo.insert((vs, done), best);
        best
    }
    go(class, (0..class.len()).collect(), 0, &mut HashMap::new())
}

pub fn vc_dimension(class: &[Labels]) -> usize {
    let n = class[0].len();
    let mut best = 0;
    for set in 0u32..(1 << n) {
        let pts: Vec<usize> = (0..n).filter(|&x| set >> x & 1 == 1).collect();
        if pts.len() <= best {
            continue;
        }
        let mut patterns: Vec<Vec<bool>> = class.iter().map(|c| pts.iter().map(|&x| c[x]).collect()).collect();
        patterns.sort();
        patterns.dedup();
        if patterns.len() == 1 << pts.len() {
            best = pts.len();
        }
    }
    best
}
