//! Distances over a finite domain: Hamming, discrete, grid L1, explicit
//! matrices, per-round matrix sequences and the version-space-induced
//! distance.

use std::io::Read;
use std::sync::Arc;

use rand::Rng;

use crate::domain::{Rational, VersionSpace};
use crate::error::{Error, Result};

/// A symmetric matrix of non-negative rational distances with a zero
/// diagonal. The triangle inequality is not required.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Rational>,
}

impl DistanceMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!("row {} has {} entries, expected {}", i, row.len(), n)));
            }
            d.extend(row.iter().copied());
        }
        let m = DistanceMatrix { n, d };
        m.validate()?;
        Ok(m)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(rows)
    }

    fn validate(&self) -> Result<()> {
        let zero = Rational::from_integer(0);
        for i in 0..self.n {
            if self.get(i, i) != zero {
                return Err(Error::InvalidMetric(format!("d({0},{0}) != 0", i)));
            }
            for j in 0..self.n {
                let v = self.get(i, j);
                if v < zero {
                    return Err(Error::InvalidMetric(format!("d({},{}) is negative", i, j)));
                }
                if v != self.get(j, i) {
                    return Err(Error::InvalidMetric(format!("d({0},{1}) != d({1},{0})", i, j)));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.d[i * self.n + j]
    }

    /// Load an `n x n` CSV matrix. Cells may be integers, `p/q` fractions or
    /// finite decimals.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (lineno, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse { line: lineno + 1, msg: e.to_string() })?;
            let row = record
                .iter()
                .map(|cell| {
                    parse_rational(cell).ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad distance `{}`", cell),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }

    /// Random symmetric matrix with integer off-diagonal entries in `1..=max`.
    pub fn random(n: usize, max: i64, rng: &mut impl Rng) -> Self {
        let mut d = vec![Rational::from_integer(0); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = Rational::from_integer(rng.gen_range(1..=max));
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        DistanceMatrix { n, d }
    }
}

/// Parse `3`, `3/4` or `0.75` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        return (q != 0).then(|| Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let frac = Rational::new(num, den);
        let int = Rational::from_integer(int.abs());
        let v = int + frac;
        return Some(if neg { -v } else { v });
    }
    s.parse::<i64>().ok().map(Rational::from_integer)
}

/// Where a distance is evaluated: the current version space and round.
#[derive(Clone, Copy, Default)]
pub struct MetricEnv<'a> {
    pub vs: Option<&'a VersionSpace>,
    pub round: usize,
}

/// A distance function on instance indices.
#[derive(Clone, Debug)]
pub enum Metric {
    /// Hamming distance between Boolean cube indices.
    Hamming,
    /// `d(x, y) = 1` for `x != y`.
    Discrete,
    /// L1 distance on a grid, coordinates in mixed radix with the last
    /// dimension least significant.
    GridL1 { dims: Vec<usize> },
    Matrix(Arc<DistanceMatrix>),
    /// Round `t` uses matrix `min(t, len - 1)`.
    Sequence(Arc<Vec<DistanceMatrix>>),
    /// `d(x, y) = |{C in vs : C(x) != C(y)}| / |vs|`.
    VersionSpaceInduced,
}

impl Metric {
    pub fn matrix(m: DistanceMatrix) -> Self {
        Metric::Matrix(Arc::new(m))
    }

    pub fn name(&self) -> String {
        match self {
            Metric::Hamming => "hamming".into(),
            Metric::Discrete => "discrete".into(),
            Metric::GridL1 { dims } => {
                let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                format!("grid:{}", dims.join("x"))
            }
            Metric::Matrix(m) => format!("matrix:{}", m.n()),
            Metric::Sequence(s) => format!("sequence:{}", s.len()),
            Metric::VersionSpaceInduced => "vs".into(),
        }
    }

    /// True when distances do not depend on the version space or round.
    pub fn is_static(&self) -> bool {
        !matches!(self, Metric::Sequence(_) | Metric::VersionSpaceInduced)
    }

    pub fn depends_on_vs(&self) -> bool {
        matches!(self, Metric::VersionSpaceInduced)
    }

    pub fn depends_on_round(&self) -> bool {
        matches!(self, Metric::Sequence(_))
    }

    pub fn distance(&self, x: usize, y: usize, env: &MetricEnv) -> Rational {
        match self {
            Metric::Hamming => Rational::from_integer(hamming(x, y) as i64),
            Metric::Discrete => Rational::from_integer((x != y) as i64),
            Metric::GridL1 { dims } => Rational::from_integer(grid_l1(dims, x, y)),
            Metric::Matrix(m) => m.get(x, y),
            Metric::Sequence(s) => s[env.round.min(s.len() - 1)].get(x, y),
            Metric::VersionSpaceInduced => match env.vs {
                Some(vs) => vs_distance(vs, x, y),
                None => Rational::from_integer(0),
            },
        }
    }

    /// Distance for static metrics.
    pub fn fixed(&self, x: usize, y: usize) -> Rational {
        debug_assert!(self.is_static());
        self.distance(x, y, &MetricEnv::default())
    }

    /// Check that the metric is defined on a domain of `n` instances.
    pub fn check_domain(&self, n: usize) -> Result<()> {
        let ok = match self {
            Metric::Hamming => n.is_power_of_two(),
            Metric::GridL1 { dims } => dims.iter().product::<usize>() == n,
            Metric::Matrix(m) => m.n() == n,
            Metric::Sequence(s) => !s.is_empty() && s.iter().all(|m| m.n() == n),
            Metric::Discrete | Metric::VersionSpaceInduced => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!("metric {} does not fit {} instances", self.name(), n)))
        }
    }
}

pub fn hamming(x: usize, y: usize) -> u32 {
    (x ^ y).count_ones()
}

fn grid_l1(dims: &[usize], mut x: usize, mut y: usize) -> i64 {
    let mut total = 0i64;
    for &d in dims.iter().rev() {
        total += ((x % d) as i64 - (y % d) as i64).abs();
        x /= d;
        y /= d;
    }
    total
}

/// Fraction of version-space members that separate `x` and `y`.
pub fn vs_distance(vs: &VersionSpace, x: usize, y: usize) -> Rational {
    let size = vs.len();
    if size == 0 {
        return Rational::from_integer(0);
    }
    let class = vs.class();
    let split = vs
        .members()
        .filter(|&i| class.concept(i).label(x) != class.concept(i).label(y))
        .count();
    Rational::new(split as i64, size as i64)
}

/// Sorted distinct distances from `x` to the other instances.
pub fn spectrum(metric: &Metric, n: usize, x: usize) -> Vec<Rational> {
    let mut d: Vec<Rational> = (0..n).filter(|&y| y != x).map(|y| metric.fixed(x, y)).collect();
    d.sort();
    d.dedup();
    d
}

/// `s_d`, the largest spectrum over all instances.
pub fn spectrum_size(metric: &Metric, n: usize) -> usize {
    (0..n).map(|x| spectrum(metric, n, x).len()).max().unwrap_or(0)
}
