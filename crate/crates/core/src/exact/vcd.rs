//! VC dimension by brute force.

use std::collections::HashSet;

use crate::domain::ConceptClass;

/// Whether `points` is shattered by `class`.
pub fn is_shattered(class: &ConceptClass, points: &[usize]) -> bool {
    let need = 1usize << points.len();
    if class.len() < need {
        return false;
    }
    let mut seen = HashSet::with_capacity(need);
    for c in class.concepts() {
        let pattern = points.iter().fold(0usize, |acc, &x| (acc << 1) | c.label(x) as usize);
        seen.insert(pattern);
        if seen.len() == need {
            return true;
        }
    }
    false
}

fn any_shattered(class: &ConceptClass, k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return is_shattered(class, chosen);
    }
    for x in start..class.n() {
        chosen.push(x);
        if any_shattered(class, k, x + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Largest size of a shattered instance set.
pub fn vcd(class: &ConceptClass) -> usize {
    let mut d = 0;
    while d < class.n() && (1usize << (d + 1)) <= class.len() && any_shattered(class, d + 1, 0, &mut Vec::new()) {
        d += 1;
    }
    d
}
