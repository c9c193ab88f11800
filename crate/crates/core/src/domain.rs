//! Finite domains, concepts, concept classes and version spaces.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rational numbers used for distances, radii and epsilon.
pub type Rational = Ratio<i64>;

static NEXT_CLASS_ID: AtomicU64 = AtomicU64::new(1);

/// An ordered finite instance space `{x_0, ..., x_{n-1}}`.
///
/// When the domain is the Boolean cube `B_m`, the point `(b_1, ..., b_m)`
/// has index `sum b_i 2^(m-i)`, so `b_1` is the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteDomain {
    size: usize,
    cube_dim: Option<usize>,
}

impl FiniteDomain {
    pub fn new(size: usize) -> Self {
        FiniteDomain { size, cube_dim: None }
    }

    /// The Boolean cube `B_m`.
    pub fn cube(m: usize) -> Self {
        FiniteDomain { size: 1 << m, cube_dim: Some(m) }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cube_dim(&self) -> Option<usize> {
        self.cube_dim
    }

    /// Coordinates `(b_1, ..., b_m)` of a cube point.
    pub fn bits(&self, x: usize) -> Vec<bool> {
        let m = self.cube_dim.unwrap_or(0);
        (0..m).map(|i| cube_bit(x, i, m)).collect()
    }

    pub fn index_of(bits: &[bool]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    /// Render a point as a bit-string on the cube or as its index elsewhere.
    pub fn point_name(&self, x: usize) -> String {
        match self.cube_dim {
            Some(m) => (0..m).map(|i| if cube_bit(x, i, m) { '1' } else { '0' }).collect(),
            None => x.to_string(),
        }
    }
}

/// Value of variable `v_{i+1}` at cube point `x` in `B_m`.
pub fn cube_bit(x: usize, i: usize, m: usize) -> bool {
    (x >> (m - 1 - i)) & 1 == 1
}

/// A total labelling `X -> {0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    labels: FixedBitSet,
}

impl Concept {
    pub fn from_labels(labels: &[bool]) -> Self {
        let mut bits = FixedBitSet::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            bits.set(i, l);
        }
        Concept { labels: bits }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        for x in 0..n {
            if f(x) {
                bits.insert(x);
            }
        }
        Concept { labels: bits }
    }

    /// Parse a bit-string such as `0110`.
    pub fn parse(s: &str) -> Option<Self> {
        let labels: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        labels.filter(|l| !l.is_empty()).map(|l| Concept::from_labels(&l))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.len() == 0
    }

    pub fn label(&self, x: usize) -> bool {
        self.labels.contains(x)
    }

    pub fn positives(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.ones()
    }

    pub fn negatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.zeroes()
    }

    pub fn count_positive(&self) -> usize {
        self.labels.count_ones(..)
    }

    /// `Some(b)` when every instance is labelled `b`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_positive() {
            0 => Some(false),
            k if k == self.len() => Some(true),
            _ => None,
        }
    }

    pub fn disagreements(&self, other: &Concept) -> usize {
        self.labels.symmetric_difference_count(&other.labels)
    }

    pub fn complement(&self) -> Concept {
        let mut labels = self.labels.clone();
        labels.toggle_range(..);
        Concept { labels }
    }

    pub fn bit_string(&self) -> String {
        (0..self.len()).map(|x| if self.label(x) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Concept({})", self.bit_string())
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

/// Normalised disagreement `|{x : a(x) != b(x)}| / n`.
pub fn delta(a: &Concept, b: &Concept) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::DomainMismatch(format!("{} vs {} instances", a.len(), b.len())));
    }
    if a.is_empty() {
        return Ok(Rational::from_integer(0));
    }
    Ok(Rational::new(a.disagreements(b) as i64, a.len() as i64))
}

/// A finite set of distinct concepts over one domain.
#[derive(Clone, Debug)]
pub struct ConceptClass {
    id: u64,
    domain: FiniteDomain,
    concepts: Vec<Concept>,
    names: Vec<String>,
    index: HashMap<Concept, usize>,
}

impl ConceptClass {
    /// Build a class, rejecting length mismatches and duplicates.
    pub fn new(domain: FiniteDomain, concepts: Vec<Concept>) -> Result<Self> {
        let names = concepts.iter().map(|c| c.bit_string()).collect();
        Self::with_names(domain, concepts, names)
    }

    pub fn with_names(domain: FiniteDomain, concepts: Vec<Concept>, names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(concepts.len());
        for (i, c) in concepts.iter().enumerate() {
            if c.len() != domain.size() {
                return Err(Error::DomainMismatch(format!(
                    "concept {} has {} labels, domain has {} instances",
                    i,
                    c.len(),
                    domain.size()
                )));
            }
            if index.insert(c.clone(), i).is_some() {
                return Err(Error::DuplicateConcept(i + 1));
            }
        }
        Ok(ConceptClass {
            id: NEXT_CLASS_ID.fetch_add(1, Ordering::Relaxed),
            domain,
            concepts,
            names,
            index,
        })
    }

    /// Build a class keeping the first occurrence of every labelling.
    pub fn dedup(domain: FiniteDomain, items: impl IntoIterator<Item = (Concept, String)>) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut concepts = Vec::new();
        let mut names = Vec::new();
        for (c, name) in items {
            if seen.contains_key(&c) {
                continue;
            }
            seen.insert(c.clone(), ());
            concepts.push(c);
            names.push(name);
        }
        Self::with_names(domain, concepts, names)
    }

    /// Process-unique identifier, used to key caches.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn domain(&self) -> &FiniteDomain {
        &self.domain
    }

    pub fn n(&self) -> usize {
        self.domain.size()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, i: usize) -> &Concept {
        &self.concepts[i]
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn find(&self, c: &Concept) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &Concept) -> bool {
        self.index.contains_key(c)
    }

    /// Parse the class-spec text format: a `domain <n>` header followed by
    /// one `n`-character bit-string per concept. `#` starts a comment.
    pub fn parse_spec(text: &str) -> Result<Self> {
        let mut domain = None;
        let mut concepts = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            if domain.is_none() {
                let mut parts = line.split_whitespace();
                let n = match (parts.next(), parts.next(), parts.next()) {
                    (Some("domain"), Some(n), None) => n.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad domain size `{}`", n),
                    })?,
                    _ => {
                        return Err(Error::Parse { line: lineno, msg: "expected `domain <n>`".into() });
                    }
                };
                domain = Some(FiniteDomain::new(n));
                continue;
            }
            let n = domain.as_ref().map(|d| d.size()).unwrap_or(0);
            let c = Concept::parse(line)
                .ok_or_else(|| Error::Parse { line: lineno, msg: format!("bad bit-string `{}`", line) })?;
            if c.len() != n {
                return Err(Error::DomainMismatch(format!(
                    "line {}: {} labels, domain has {} instances",
                    lineno,
                    c.len(),
                    n
                )));
            }
            if concepts.iter().any(|(d, _)| d == &c) {
                return Err(Error::DuplicateConcept(lineno));
            }
            concepts.push((c, lineno));
        }
        let domain = domain.ok_or(Error::Parse { line: 0, msg: "missing `domain <n>` header".into() })?;
        Self::new(domain, concepts.into_iter().map(|(c, _)| c).collect())
    }

    pub fn to_spec(&self) -> String {
        let mut out = format!("domain {}\n", self.n());
        for c in &self.concepts {
            out.push_str(&c.bit_string());
            out.push('\n');
        }
        out
    }

    /// Subclass made of the given concept indices, in that order.
    pub fn subclass(&self, indices: &[usize]) -> Result<Self> {
        let concepts = indices.iter().map(|&i| self.concepts[i].clone()).collect();
        let names = indices.iter().map(|&i| self.names[i].clone()).collect();
        Self::with_names(self.domain.clone(), concepts, names)
    }
}

/// The set of concepts still consistent with an interaction, stored as a
/// bit mask over the indices of its ambient class.
#[derive(Clone)]
pub struct VersionSpace {
    class: Arc<ConceptClass>,
    mask: FixedBitSet,
}

impl VersionSpace {
    pub fn full(class: Arc<ConceptClass>) -> Self {
        let mut mask = FixedBitSet::with_capacity(class.len());
        mask.insert_range(..);
        VersionSpace { class, mask }
    }

    pub fn from_mask(class: Arc<ConceptClass>, mask: FixedBitSet) -> Self {
        debug_assert_eq!(mask.len(), class.len());
        VersionSpace { class, mask }
    }

    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.contains(i)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.ones()
    }

    /// The unique member, if there is exactly one.
    pub fn singleton(&self) -> Option<usize> {
        let mut it = self.mask.ones();
        match (it.next(), it.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }

    pub fn retain(&self, mut keep: impl FnMut(usize) -> bool) -> VersionSpace {
        let mut mask = FixedBitSet::with_capacity(self.mask.len());
        for i in self.mask.ones() {
            if keep(i) {
                mask.insert(i);
            }
        }
        VersionSpace { class: self.class.clone(), mask }
    }

    /// `Some(b)` when every member labels `x` with `b`.
    pub fn agreed_label(&self, x: usize) -> Option<bool> {
        let mut it = self.mask.ones().map(|i| self.class.concept(i).label(x));
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }
}

impl fmt::Debug for VersionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.mask.ones()).finish()
    }
}

impl PartialEq for VersionSpace {
    fn eq(&self, other: &Self) -> bool {
        self.class.id() == other.class.id() && self.mask == other.mask
    }
}
