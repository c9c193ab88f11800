//! Generators for Boolean concept classes over `B_m` and the decision
//! list / monotone DNF representations they are built from.
//!
//! Variable `v_i` (1-based) is coordinate `b_i`, which is bit `m - i` of the
//! instance index. Monomials and clauses are stored as index-aligned bit
//! masks, so `x & mask == mask` tests whether all chosen variables are set.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::caps::Caps;
use crate::domain::{cube_bit, Concept, ConceptClass, FiniteDomain};
use crate::error::{Error, Result};

/// Mask bit for variable `v_{i+1}` in `B_m`.
pub fn var_bit(i: usize, m: usize) -> usize {
    1 << (m - 1 - i)
}

fn cube_checks(what: &str, m: usize, concepts: u128, caps: &Caps) -> Result<FiniteDomain> {
    if m == 0 || m > 20 {
        return Err(Error::InvalidParameter(format!("{}: m must be in 1..=20, got {}", what, m)));
    }
    caps.check_domain(what, 1u128 << m)?;
    caps.check_concepts(what, concepts)?;
    Ok(FiniteDomain::cube(m))
}

fn mask_name(mask: usize, m: usize, sep: &str, empty: &str) -> String {
    let parts: Vec<String> = (0..m).filter(|&i| mask & var_bit(i, m) != 0).map(|i| format!("v{}", i + 1)).collect();
    if parts.is_empty() {
        empty.to_string()
    } else {
        parts.join(sep)
    }
}

fn literal_name(pos: usize, neg: usize, m: usize, sep: &str, empty: &str) -> String {
    let parts: Vec<String> = (0..m)
        .filter_map(|i| {
            let b = var_bit(i, m);
            if pos & b != 0 {
                Some(format!("v{}", i + 1))
            } else if neg & b != 0 {
                Some(format!("~v{}", i + 1))
            } else {
                None
            }
        })
        .collect();
    if parts.is_empty() {
        empty.to_string()
    } else {
        parts.join(sep)
    }
}

/// Positive monomials: `2^m` concepts; the empty monomial is constant 1.
pub fn gen_pmon(m: usize, caps: &Caps) -> Result<ConceptClass> {
    let dom = cube_checks("pmon", m, 1u128 << m.min(100), caps)?;
    let n = dom.size();
    let items = (0..(1usize << m)).map(|mask| {
        (Concept::from_fn(n, |x| x & mask == mask), mask_name(mask, m, "&", "1"))
    });
    ConceptClass::dedup(dom, items)
}

/// Pairs `(pos, neg)` of disjoint variable masks, in a fixed order.
fn literal_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(m as u32) {
        let (mut pos, mut neg, mut c) = (0, 0, code);
        for i in (0..m).rev() {
            match c % 3 {
                1 => pos |= var_bit(i, m),
                2 => neg |= var_bit(i, m),
                _ => {}
            }
            c /= 3;
        }
        out.push((pos, neg));
    }
    out
}

fn monomial_concept(n: usize, pos: usize, neg: usize) -> Concept {
    Concept::from_fn(n, |x| x & pos == pos && x & neg == 0)
}

fn clause_concept(n: usize, pos: usize, neg: usize) -> Concept {
    Concept::from_fn(n, |x| x & pos != 0 || x & neg != neg)
}

/// Monomials over literals: `3^m` concepts, constant 0 excluded.
pub fn gen_mon(m: usize, caps: &Caps) -> Result<ConceptClass> {
    let dom = cube_checks("mon", m, 3u128.pow(m as u32), caps)?;
    let n = dom.size();
    let items = literal_pairs(m)
        .into_iter()
        .map(|(p, q)| (monomial_concept(n, p, q), literal_name(p, q, m, "&", "1")));
    ConceptClass::dedup(dom, items)
}

/// Clauses, the duals `x -> 1 - f(not x)` of monomials: `3^m` concepts
/// including constant 0.
pub fn gen_claus(m: usize, caps: &Caps) -> Result<ConceptClass> {
    let dom = cube_checks("claus", m, 3u128.pow(m as u32), caps)?;
    let n = dom.size();
    let items = literal_pairs(m)
        .into_iter()
        .map(|(p, q)| (clause_concept(n, p, q), literal_name(p, q, m, "|", "0")));
    ConceptClass::dedup(dom, items)
}

/// Monomials together with clauses, which is the class of 1-decision lists
/// with at most one alternation.
pub fn gen_monclaus(m: usize, caps: &Caps) -> Result<ConceptClass> {
    let dom = cube_checks("monclaus", m, 2 * 3u128.pow(m as u32), caps)?;
    let n = dom.size();
    let pairs = literal_pairs(m);
    let mons = pairs.iter().map(|&(p, q)| (monomial_concept(n, p, q), literal_name(p, q, m, "&", "1")));
    let claus = pairs.iter().map(|&(p, q)| (clause_concept(n, p, q), literal_name(p, q, m, "|", "0")));
    ConceptClass::dedup(dom, mons.chain(claus).collect::<Vec<_>>())
}

/// Parities: `2^m` concepts; the empty parity is constant 0.
pub fn gen_parity(m: usize, caps: &Caps) -> Result<ConceptClass> {
    let dom = cube_checks("parity", m, 1u128 << m.min(100), caps)?;
    let n = dom.size();
    let items = (0..(1usize << m)).map(|mask| {
        (Concept::from_fn(n, |x| (x & mask).count_ones() % 2 == 1), mask_name(mask, m, "^", "0"))
    });
    ConceptClass::dedup(dom, items)
}

/// Positive monomials with a primed coordinate: over `B_{m+1}`,
/// `C'(b, 0) = C(b)` and `C'(b, 1) = 1 - C(b)`.
pub fn gen_primed_pmon(m: usize, caps: &Caps) -> Result<ConceptClass> {
    let dom = cube_checks("primed_pmon", m + 1, 1u128 << m.min(100), caps)?;
    let n = dom.size();
    let items = (0..(1usize << m)).map(|mask| {
        let c = Concept::from_fn(n, |x| ((x >> 1) & mask == mask) ^ (x & 1 == 1));
        (c, format!("{}'", mask_name(mask, m, "&", "1")))
    });
    ConceptClass::dedup(dom, items)
}

/// The `n` concepts `{x_i}` over a plain domain of size `n`.
pub fn gen_singletons(n: usize, caps: &Caps) -> Result<ConceptClass> {
    if n == 0 {
        return Err(Error::InvalidParameter("singletons: n must be positive".into()));
    }
    caps.check_domain("singletons", n as u128)?;
    caps.check_concepts("singletons", n as u128)?;
    let items = (0..n).map(|i| (Concept::from_fn(n, |x| x == i), format!("{{x{}}}", i)));
    ConceptClass::dedup(FiniteDomain::new(n), items)
}

/// Four concepts over three instances with VC dimension 1.
pub fn vcd1_example() -> ConceptClass {
    ConceptClass::parse_spec("domain 3\n101\n001\n011\n010\n").expect("fixed class")
}

/// A literal `v_{var+1}` or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn eval(&self, x: usize, m: usize) -> bool {
        cube_bit(x, self.var, m) == self.positive
    }

    pub fn negate(&self) -> Literal {
        Literal { var: self.var, positive: !self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "v{}", self.var + 1)
        } else {
            write!(f, "~v{}", self.var + 1)
        }
    }
}

/// `[(l_1, b_1), ..., (l_z, b_z), b_{z+1}]`, each variable used at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionList {
    pub m: usize,
    pub items: Vec<(Literal, bool)>,
    pub default: bool,
}

impl DecisionList {
    pub fn new(m: usize, items: Vec<(Literal, bool)>, default: bool) -> Result<Self> {
        let mut used = vec![false; m];
        for (l, _) in &items {
            if l.var >= m || std::mem::replace(&mut used[l.var], true) {
                return Err(Error::InvalidParameter(format!("variable v{} repeated or out of range", l.var + 1)));
            }
        }
        Ok(DecisionList { m, items, default })
    }

    pub fn eval(&self, x: usize) -> bool {
        self.items
            .iter()
            .find(|(l, _)| l.eval(x, self.m))
            .map(|&(_, b)| b)
            .unwrap_or(self.default)
    }

    pub fn to_concept(&self) -> Concept {
        Concept::from_fn(1 << self.m, |x| self.eval(x))
    }

    /// Indices `i` in `1..=z` with `b_{i+1} != b_i`, the default counting
    /// as `b_{z+1}`.
    pub fn alternations(&self) -> usize {
        let mut labels: Vec<bool> = self.items.iter().map(|&(_, b)| b).collect();
        labels.push(self.default);
        labels.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Random list over `m` variables with a uniform length.
    pub fn random(m: usize, rng: &mut impl Rng) -> Self {
        let z = rng.gen_range(0..=m);
        let mut vars: Vec<usize> = (0..m).collect();
        vars.shuffle(rng);
        let items = vars[..z]
            .iter()
            .map(|&var| (Literal { var, positive: rng.gen() }, rng.gen()))
            .collect();
        DecisionList { m, items, default: rng.gen() }
    }
}

impl fmt::Display for DecisionList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (l, b) in &self.items {
            write!(f, "({},{}),", l, *b as u8)?;
        }
        write!(f, "{}]", self.default as u8)
    }
}

/// Maximal runs of items with equal labels. The default is not an item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Vec<(Literal, bool)>>,
}

impl BlockDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

pub fn blocks_of(list: &DecisionList) -> BlockDecomposition {
    let mut blocks: Vec<Vec<(Literal, bool)>> = Vec::new();
    for &item in &list.items {
        match blocks.last_mut() {
            Some(b) if b[0].1 == item.1 => b.push(item),
            _ => blocks.push(vec![item]),
        }
    }
    BlockDecomposition { blocks }
}

/// All 1-decision lists over `B_m` with at most `k_alt` alternations,
/// deduplicated by the function they compute. The first list found in a
/// fixed depth-first order represents each function.
pub fn dl_lists(m: usize, k_alt: usize, caps: &Caps) -> Result<Vec<DecisionList>> {
    if m == 0 || m > 6 {
        return Err(Error::InvalidParameter(format!("dl: m must be in 1..=6, got {}", m)));
    }
    let mut syntactic: u128 = 0;
    let mut perm: u128 = 1;
    for z in 0..=m {
        if z > 0 {
            perm *= (m - z + 1) as u128;
        }
        syntactic += perm * (1u128 << z) * (1u128 << (z + 1));
    }
    caps.check_concepts("dl (syntactic lists / 64)", syntactic / 64)?;
    let full: u64 = if m == 6 { u64::MAX } else { (1u64 << (1 << m)) - 1 };
    let mut seen: HashMap<u64, ()> = HashMap::new();
    let mut out = Vec::new();
    let mut items = Vec::new();
    dl_dfs(m, k_alt, full, 0, 0, &mut items, &mut seen, &mut out);
    caps.check_concepts("dl", out.len() as u128)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dl_dfs(
    m: usize,
    k_alt: usize,
    remaining: u64,
    positive: u64,
    used: usize,
    items: &mut Vec<(Literal, bool)>,
    seen: &mut HashMap<u64, ()>,
    out: &mut Vec<DecisionList>,
) {
    let item_alt = items.windows(2).filter(|w| w[0].1 != w[1].1).count();
    for default in [false, true] {
        let alt = item_alt + items.last().map_or(0, |&(_, b)| (b != default) as usize);
        if alt > k_alt {
            continue;
        }
        let f = if default { positive | remaining } else { positive };
        if seen.insert(f, ()).is_none() {
            out.push(DecisionList { m, items: items.clone(), default });
        }
    }
    if item_alt > k_alt {
        return;
    }
    for var in 0..m {
        if used & (1 << var) != 0 {
            continue;
        }
        for positive_lit in [true, false] {
            let lit = Literal { var, positive: positive_lit };
            let mut hit = 0u64;
            for x in 0..(1usize << m) {
                if remaining >> x & 1 == 1 && lit.eval(x, m) {
                    hit |= 1 << x;
                }
            }
            for b in [false, true] {
                items.push((lit, b));
                let pos = if b { positive | hit } else { positive };
                dl_dfs(m, k_alt, remaining & !hit, pos, used | (1 << var), items, seen, out);
                items.pop();
            }
        }
    }
}

/// The class of 1-decision lists with at most `k_alt` alternations.
pub fn gen_dl(m: usize, k_alt: usize, caps: &Caps) -> Result<ConceptClass> {
    let lists = dl_lists(m, k_alt, caps)?;
    let items = lists.iter().map(|l| (l.to_concept(), l.to_string()));
    ConceptClass::dedup(FiniteDomain::cube(m), items.collect::<Vec<_>>())
}

/// A monotone DNF as a reduced antichain of monomials (index-aligned masks).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MdnfFormula {
    pub m: usize,
    pub terms: Vec<usize>,
}

impl MdnfFormula {
    /// Drops terms implied by a smaller term and sorts the rest.
    pub fn new(m: usize, terms: impl IntoIterator<Item = usize>) -> Self {
        let mut terms: Vec<usize> = terms.into_iter().collect();
        terms.sort_by_key(|t| (t.count_ones(), *t));
        terms.dedup();
        let mut kept: Vec<usize> = Vec::new();
        for t in terms {
            if !kept.iter().any(|&k| t & k == k) {
                kept.push(t);
            }
        }
        kept.sort_by_key(|t| (t.count_ones(), std::cmp::Reverse(*t)));
        MdnfFormula { m, terms: kept }
    }

    pub fn eval(&self, x: usize) -> bool {
        self.terms.iter().any(|&t| x & t == t)
    }

    pub fn to_concept(&self) -> Concept {
        Concept::from_fn(1 << self.m, |x| self.eval(x))
    }
}

impl fmt::Display for MdnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|&t| mask_name(t, self.m, "", "1")).collect();
        f.write_str(&parts.join("|"))
    }
}

/// Monotone DNFs with at most `s` terms of `1..=z` variables each.
pub fn mdnf_formulas(m: usize, s: usize, z: usize, caps: &Caps) -> Result<Vec<MdnfFormula>> {
    if m == 0 || m > 12 || z == 0 {
        return Err(Error::InvalidParameter(format!("mdnf: need 1 <= m <= 12 and z >= 1, got m={} z={}", m, z)));
    }
    let monomials: Vec<usize> = (1..(1usize << m))
        .filter(|t| (t.count_ones() as usize) <= z)
        .collect::<Vec<_>>();
    let mut ordered = monomials;
    ordered.sort_by_key(|t| (t.count_ones(), std::cmp::Reverse(*t)));
    let mut estimate: u128 = 0;
    let mut binom: u128 = 1;
    for j in 0..=s.min(ordered.len()) {
        if j > 0 {
            binom = binom * (ordered.len() - j + 1) as u128 / j as u128;
        }
        estimate += binom;
    }
    caps.check_concepts("mdnf (term sets / 64)", estimate / 64)?;
    let mut seen: HashMap<Concept, ()> = HashMap::new();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    mdnf_dfs(m, s, &ordered, 0, &mut chosen, &mut seen, &mut out);
    caps.check_concepts("mdnf", out.len() as u128)?;
    Ok(out)
}

fn mdnf_dfs(
    m: usize,
    s: usize,
    monomials: &[usize],
    start: usize,
    chosen: &mut Vec<usize>,
    seen: &mut HashMap<Concept, ()>,
    out: &mut Vec<MdnfFormula>,
) {
    let f = MdnfFormula::new(m, chosen.iter().copied());
    let c = f.to_concept();
    if seen.insert(c, ()).is_none() {
        out.push(f);
    }
    if chosen.len() == s {
        return;
    }
    for i in start..monomials.len() {
        chosen.push(monomials[i]);
        mdnf_dfs(m, s, monomials, i + 1, chosen, seen, out);
        chosen.pop();
    }
}

pub fn gen_mdnf(m: usize, s: usize, z: usize, caps: &Caps) -> Result<ConceptClass> {
    let formulas = mdnf_formulas(m, s, z, caps)?;
    caps.check_domain("mdnf", 1u128 << m)?;
    let items = formulas.iter().map(|f| (f.to_concept(), f.to_string()));
    ConceptClass::dedup(FiniteDomain::cube(m), items.collect::<Vec<_>>())
}
