//! Parsing of `--class`, `--metric`, `--cs`, `--oracle`, `--learner` and
//! `--targets` values.
//!
//! Values look like `name`, `name:key=value,key=value` or
//! `name(key=value)`. A bare value without `=` is stored under the key `""`,
//! so `file:classes/pmon3.txt` and `matrix:d.csv` work.

use std::collections::BTreeMap;
use std::fs;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::caps::Caps;
use crate::classes::{
    gen_claus, gen_dl, gen_mdnf, gen_mon, gen_monclaus, gen_parity, gen_pmon, gen_primed_pmon, gen_singletons,
    vcd1_example,
};
use crate::domain::{ConceptClass, Rational};
use crate::error::{Error, Result};
use crate::exact::{ContrastGame, MinimaxOracle, Solver};
use crate::learners::{
    vcd1_metric, CertificateLearner, HalvingLearner, InjectiveLearner, MdnfDynamicLearner, MonClausLearner,
    PmonLearner, ProxFromMin, Vcd1Learner,
};
use crate::metrics::{parse_rational, DistanceMatrix, Metric};
use crate::oracles::{CsInjective, CsMin, CsProx, FirstByIndex, LastByIndex, NoContrast, SeededRandom};
use crate::protocol::{ContrastSet, Learner, OracleStrategy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl Spec {
    pub fn parse(s: &str) -> Result<Spec> {
        let s = s.trim();
        let (name, rest) = if let Some(open) = s.find('(') {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| bad(format!("unbalanced parentheses in {:?}", s)))?;
            (&s[..open], inner)
        } else {
            match s.split_once(':') {
                Some((n, r)) => (n, r),
                None => (s, ""),
            }
        };
        if name.is_empty() {
            return Err(bad(format!("empty name in {:?}", s)));
        }
        let mut params = BTreeMap::new();
        if name == "file" || name == "matrix" || name == "sequence" {
            params.insert(String::new(), rest.to_string());
        } else {
            for part in split_top(rest) {
                match part.split_once('=') {
                    Some((k, v)) => params.insert(k.trim().to_string(), v.trim().to_string()),
                    None => params.insert(String::new(), part.trim().to_string()),
                };
            }
        }
        Ok(Spec { name: name.to_string(), params })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(|s| s.as_str())
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.get(key).ok_or_else(|| bad(format!("{} needs {}=", self.name, key)))?;
        v.parse().map_err(|_| bad(format!("{}: {}={:?} is not a number", self.name, key, v)))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        if self.get(key).is_some() {
            self.usize(key)
        } else {
            Ok(default)
        }
    }
}

/// Split on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < s.len() {
        out.push(&s[start..]);
    }
    out.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

fn bad(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

pub struct ClassHandle {
    pub class: Arc<ConceptClass>,
    pub spec: Spec,
}

impl ClassHandle {
    /// Number of variables for classes over `B_m`.
    pub fn cube_dim(&self) -> Result<usize> {
        self.class
            .domain()
            .cube_dim()
            .ok_or_else(|| bad(format!("class {} is not over a Boolean cube", self.spec.name)))
    }
}

pub fn parse_class(s: &str, caps: &Caps) -> Result<ClassHandle> {
    let spec = Spec::parse(s)?;
    let class = match spec.name.as_str() {
        "pmon" => gen_pmon(spec.usize("m")?, caps)?,
        "mon" => gen_mon(spec.usize("m")?, caps)?,
        "claus" => gen_claus(spec.usize("m")?, caps)?,
        "monclaus" => gen_monclaus(spec.usize("m")?, caps)?,
        "parity" => gen_parity(spec.usize("m")?, caps)?,
        "primed_pmon" => gen_primed_pmon(spec.usize("m")?, caps)?,
        "dl" => gen_dl(spec.usize("m")?, spec.usize("k")?, caps)?,
        "mdnf" => gen_mdnf(spec.usize("m")?, spec.usize("s")?, spec.usize("z")?, caps)?,
        "singletons" => gen_singletons(spec.usize("n")?, caps)?,
        "vcd1_example" => vcd1_example(),
        "file" => {
            let path = spec.get("").unwrap_or_default();
            let class = ConceptClass::parse_spec(&fs::read_to_string(path)?)?;
            caps.check_concepts("class file", class.len() as u128)?;
            class
        }
        other => return Err(bad(format!("unknown class {:?}", other))),
    };
    Ok(ClassHandle { class: Arc::new(class), spec })
}

pub fn parse_metric(s: &str, class: &ConceptClass) -> Result<Metric> {
    let spec = Spec::parse(s)?;
    let metric = match spec.name.as_str() {
        "hamming" => Metric::Hamming,
        "discrete" | "d0" => Metric::Discrete,
        "vs" => Metric::VersionSpaceInduced,
        "grid" => {
            let dims = spec.get("dims").or_else(|| spec.get("")).ok_or_else(|| bad("grid needs dims".into()))?;
            let dims = dims
                .split('x')
                .map(|d| d.parse::<usize>().map_err(|_| bad(format!("bad grid dimension {:?}", d))))
                .collect::<Result<Vec<_>>>()?;
            Metric::GridL1 { dims }
        }
        "line" => Metric::GridL1 { dims: vec![class.n()] },
        "matrix" => Metric::matrix(read_matrix(spec.get("").unwrap_or_default())?),
        "sequence" => {
            let files = spec.get("").unwrap_or_default();
            let mats = files.split('+').map(read_matrix).collect::<Result<Vec<_>>>()?;
            Metric::Sequence(Arc::new(mats))
        }
        "vcd1" => vcd1_metric(class)?.metric,
        other => return Err(Error::InvalidMetric(format!("unknown metric {:?}", other))),
    };
    metric.check_domain(class.n())?;
    Ok(metric)
}

fn read_matrix(path: &str) -> Result<DistanceMatrix> {
    DistanceMatrix::from_csv(fs::File::open(path)?)
}

pub struct CsHandle {
    pub cs: Arc<dyn ContrastSet>,
    pub metric: Option<Metric>,
    pub injective: Option<Arc<CsInjective>>,
    pub kind: String,
}

/// `min`, `prox`, `injective:map=FILE` or `none`. The metric comes from
/// `metric=`/`d=` or else from `default_metric`.
pub fn parse_cs(s: &str, class: &ConceptClass, default_metric: &str) -> Result<CsHandle> {
    let spec = Spec::parse(s)?;
    let metric_name = spec.get("metric").or_else(|| spec.get("d")).unwrap_or(default_metric);
    match spec.name.as_str() {
        "min" => {
            let metric = parse_metric(metric_name, class)?;
            Ok(CsHandle { cs: Arc::new(CsMin::new(metric.clone())), metric: Some(metric), injective: None, kind: "min".into() })
        }
        "prox" => {
            let metric = parse_metric(metric_name, class)?;
            Ok(CsHandle { cs: Arc::new(CsProx::new(metric.clone())?), metric: Some(metric), injective: None, kind: "prox".into() })
        }
        "injective" => {
            let path = spec.get("map").or_else(|| spec.get("")).ok_or_else(|| bad("injective needs map=FILE".into()))?;
            let inj = Arc::new(CsInjective::parse(class, &fs::read_to_string(path)?)?);
            Ok(CsHandle { cs: inj.clone(), metric: None, injective: Some(inj), kind: "injective".into() })
        }
        "none" | "mq" => Ok(CsHandle { cs: Arc::new(NoContrast), metric: None, injective: None, kind: "none".into() }),
        other => Err(bad(format!("unknown contrast set {:?}", other))),
    }
}

pub fn parse_oracle(s: &str, class: &Arc<ConceptClass>, cs: &Arc<dyn ContrastSet>, caps: &Caps) -> Result<Box<dyn OracleStrategy>> {
    let spec = Spec::parse(s)?;
    Ok(match spec.name.as_str() {
        "first" => Box::new(FirstByIndex),
        "last" => Box::new(LastByIndex),
        "random" => {
            let seed = spec.get("seed").or_else(|| spec.get("")).unwrap_or("0");
            Box::new(SeededRandom::new(seed.parse().map_err(|_| bad(format!("bad seed {:?}", seed)))?))
        }
        "minimax" => Box::new(MinimaxOracle::new(class.clone(), cs.clone(), caps)),
        other => return Err(bad(format!("unknown oracle {:?}", other))),
    })
}

pub type LearnerFactory = Box<dyn Fn() -> Result<Box<dyn Learner>>>;

/// A factory producing a fresh learner per target.
pub fn parse_learner(s: &str, class: &ClassHandle, cs: &CsHandle, caps: &Caps) -> Result<LearnerFactory> {
    let spec = Spec::parse(s)?;
    let c = class.class.clone();
    Ok(match spec.name.as_str() {
        "pmon" => {
            let m = class.cube_dim()?;
            Box::new(move || Ok(Box::new(PmonLearner::new(m)) as Box<dyn Learner>))
        }
        "monclaus" => {
            let m = class.cube_dim()?;
            Box::new(move || Ok(Box::new(MonClausLearner::new(m)) as Box<dyn Learner>))
        }
        "mdnf" => {
            let m = class.cube_dim()?;
            let s = match spec.get("s") {
                Some(_) => spec.usize("s")?,
                None => class.spec.usize("s")?,
            };
            Box::new(move || Ok(Box::new(MdnfDynamicLearner::new(m, s)) as Box<dyn Learner>))
        }
        "vcd1" => {
            let cons = Arc::new(vcd1_metric(&c)?);
            Box::new(move || Ok(Box::new(Vcd1Learner::new(cons.clone())) as Box<dyn Learner>))
        }
        "injective" => {
            let inj = cs.injective.clone().ok_or_else(|| bad("learner injective needs --cs injective:map=FILE".into()))?;
            Box::new(move || Ok(Box::new(InjectiveLearner::new(inj.clone())) as Box<dyn Learner>))
        }
        "halving" => {
            let game = Arc::new(ContrastGame::new(c, cs.cs.clone()));
            Box::new(move || Ok(Box::new(HalvingLearner::new(game.clone())) as Box<dyn Learner>))
        }
        "optimal" | "certificate" => {
            let solver = Arc::new(Mutex::new(Solver::new(ContrastGame::new(c, cs.cs.clone()), caps)));
            Box::new(move || Ok(Box::new(CertificateLearner::new(solver.clone())) as Box<dyn Learner>))
        }
        "prox" => {
            let inner_spec = spec.get("inner").unwrap_or("pmon").to_string();
            let metric = cs.metric.clone().ok_or_else(|| bad("learner prox needs --cs prox:metric=...".into()))?;
            let inner_cs = CsHandle {
                cs: Arc::new(CsMin::new(metric.clone())),
                metric: Some(metric.clone()),
                injective: None,
                kind: "min".into(),
            };
            let inner = parse_learner(&inner_spec, class, &inner_cs, caps)?;
            Box::new(move || Ok(Box::new(ProxFromMin::new(inner()?, c.clone(), metric.clone())?) as Box<dyn Learner>))
        }
        other => return Err(bad(format!("unknown learner {:?}", other))),
    })
}

/// Target indices and whether one row per target is wanted.
pub fn parse_targets(s: &str, class_len: usize) -> Result<(Vec<usize>, bool)> {
    let s = s.trim();
    match s {
        "all" => return Ok(((0..class_len).collect(), false)),
        "enumerate" => return Ok(((0..class_len).collect(), true)),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("random:") {
        let (count, seed) = rest.split_once(':').unwrap_or((rest, "0"));
        let count: usize = count.parse().map_err(|_| bad(format!("bad target count {:?}", count)))?;
        let seed: u64 = seed.trim_start_matches("seed=").parse().map_err(|_| bad(format!("bad seed {:?}", seed)))?;
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut all: Vec<usize> = (0..class_len).collect();
        all.shuffle(&mut rng);
        all.truncate(count.min(class_len));
        all.sort();
        return Ok((all, true));
    }
    let list = s
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i < class_len => Ok(i),
            _ => Err(bad(format!("bad target {:?}", t))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((list, true))
}

/// `2^-6`, `1/64` or `0.015625`.
pub fn parse_eps(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = if let Some(exp) = s.strip_prefix("2^") {
        exp.parse::<i32>().map(|e| 2f64.powi(e)).map_err(|_| bad(format!("bad eps {:?}", s)))?
    } else if let Some(r) = parse_rational(s) {
        *r.numer() as f64 / *r.denom() as f64
    } else {
        s.parse::<f64>().map_err(|_| bad(format!("bad eps {:?}", s)))?
    };
    if !(v > 0.0) {
        return Err(bad(format!("eps must be positive, got {:?}", s)));
    }
    Ok(v)
}

/// Exact rational form of an eps value for the finite protocol.
pub fn parse_eps_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some(exp) = s.strip_prefix("2^-") {
        let e: u32 = exp.parse().map_err(|_| bad(format!("bad eps {:?}", s)))?;
        if e > 62 {
            return Err(bad(format!("eps {:?} too small", s)));
        }
        return Ok(Rational::new(1, 1i64 << e));
    }
    parse_rational(s).ok_or_else(|| bad(format!("bad eps {:?}", s)))
}
