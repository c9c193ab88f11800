//! The `clab` command line: `simulate`, `complexity`, `sd`, `vcd`,
//! `continuous`, `verify` and `table1`.
//!
//! Options come from flags or from a `key=value` file given with
//! `--config`; flags win. Exit codes: 0 success, 1 runtime error, 2 config
//! error, 3 cap exceeded, 4 property violation. Failures print one line
//! `error: code=<name> exit=<n> msg=<text>` to stderr.

pub mod report;
pub mod spec;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::caps::Caps;
use crate::continuous::{run_trials, table1, Adversary, Model, Setting};
use crate::domain::ConceptClass;
use crate::error::Error;
use crate::exact::{vcd, ContrastGame, ExMqGame, SdSolver, Solver, Value};
use crate::learners::{
    run_self_directed, vcd1_metric, SdCertificateLearner, SdDecisionListLearner, SdFromContrast, SdMdnfLearner,
    SelfDirectedLearner,
};
use crate::metrics::Metric;
use crate::oracles::NoContrast;
use crate::protocol::{run_protocol, Outcome, ProtocolConfig, Query};

use report::{Format, Report};
use spec::{parse_class, parse_cs, parse_eps, parse_eps_rational, parse_learner, parse_oracle, parse_targets, ClassHandle, CsHandle};

#[derive(Parser, Debug)]
#[command(name = "clab", version, about = "Exact and simulated complexity of learning with contrastive examples")]
pub struct Cli {
    /// File of `key=value` lines; `command=<name>` selects the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Run a learner against targets and report query counts.
    Simulate(Opts),
    /// Exact optimal worst-case complexity by game search.
    Complexity(Opts),
    /// Self-directed complexity, exact or by a self-directed learner.
    Sd(Opts),
    /// VC dimension, plus the ordering metric for VC dimension 1.
    Vcd(Opts),
    /// Thresholds and rectangles over [0,1]^k.
    Continuous(Opts),
    /// Check the stated inequalities on fixed and random classes.
    Verify(Opts),
    /// Measured query counts per eps for every setting and model.
    Table1(Opts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Complexity(_) => "complexity",
            Command::Sd(_) => "sd",
            Command::Vcd(_) => "vcd",
            Command::Continuous(_) => "continuous",
            Command::Verify(_) => "verify",
            Command::Table1(_) => "table1",
        }
    }

    fn opts_mut(&mut self) -> &mut Opts {
        match self {
            Command::Simulate(o)
            | Command::Complexity(o)
            | Command::Sd(o)
            | Command::Vcd(o)
            | Command::Continuous(o)
            | Command::Verify(o)
            | Command::Table1(o) => o,
        }
    }

    fn from_name(name: &str) -> Option<Command> {
        let o = Opts::default();
        Some(match name {
            "simulate" => Command::Simulate(o),
            "complexity" => Command::Complexity(o),
            "sd" => Command::Sd(o),
            "vcd" => Command::Vcd(o),
            "continuous" => Command::Continuous(o),
            "verify" => Command::Verify(o),
            "table1" => Command::Table1(o),
            _ => return None,
        })
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// e.g. `pmon:m=3`, `mdnf:m=4,s=2,z=2`, `file:PATH`, `threshold`, `rect:k=2`.
    #[arg(long)]
    pub class: Option<String>,
    /// `min:metric=hamming`, `prox:d=hamming`, `injective:map=FILE`, `none`.
    #[arg(long)]
    pub cs: Option<String>,
    /// Default metric when `--cs` names none.
    #[arg(long)]
    pub metric: Option<String>,
    /// `first`, `last`, `random:seed=N`, `minimax`.
    #[arg(long)]
    pub oracle: Option<String>,
    #[arg(long)]
    pub learner: Option<String>,
    /// `all`, `enumerate`, `random:N:SEED` or a comma list of indices.
    #[arg(long)]
    pub targets: Option<String>,
    /// `2^-B`, `p/q` or a decimal.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `json`, `csv` or `text`.
    #[arg(long)]
    pub format: Option<String>,
    /// complexity: `contrast`, `mq`, `exmq` or `sd`.
    #[arg(long)]
    pub quantity: Option<String>,
    #[arg(long)]
    pub suite: Option<String>,
    /// continuous: `min`, `prox` or `baseline`.
    #[arg(long)]
    pub model: Option<String>,
    /// continuous: `farthest`, `nearest`, `random:N` or `halving`.
    #[arg(long)]
    pub adversary: Option<String>,
    /// table1: rectangle dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// table1: comma list of `B` for `eps = 2^-B`.
    #[arg(long)]
    pub exponents: Option<String>,
    /// Write interaction traces as JSON lines to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// vcd: write the constructed distance matrix as CSV.
    #[arg(long)]
    pub metric_out: Option<PathBuf>,
    /// Report `elapsed_ms = 0` so equal runs give identical bytes.
    #[arg(long)]
    pub deterministic: bool,
    /// verify: include long exact searches.
    #[arg(long)]
    pub slow: bool,
}

impl Opts {
    /// Fill unset options from `key=value` lines.
    pub fn merge_config(&mut self, text: &str) -> Result<Option<String>, Error> {
        let mut command = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key=value, got {:?}", line) })?;
            let (k, v) = (k.trim().replace('_', "-"), v.trim().to_string());
            let bad = |what: &str| Error::Parse { line: i + 1, msg: format!("{} needs {}, got {:?}", k, what, v) };
            let set = |slot: &mut Option<String>| {
                slot.get_or_insert(v.clone());
            };
            match k.as_str() {
                "command" => command = Some(v.clone()),
                "class" => set(&mut self.class),
                "cs" => set(&mut self.cs),
                "metric" => set(&mut self.metric),
                "oracle" => set(&mut self.oracle),
                "learner" => set(&mut self.learner),
                "targets" => set(&mut self.targets),
                "eps" => set(&mut self.eps),
                "format" => set(&mut self.format),
                "quantity" => set(&mut self.quantity),
                "suite" => set(&mut self.suite),
                "model" => set(&mut self.model),
                "adversary" => set(&mut self.adversary),
                "exponents" => set(&mut self.exponents),
                "trials" => {
                    let n = v.parse().map_err(|_| bad("an integer"))?;
                    self.trials.get_or_insert(n);
                }
                "seed" => {
                    let n = v.parse().map_err(|_| bad("an integer"))?;
                    self.seed.get_or_insert(n);
                }
                "k" => {
                    let n = v.parse().map_err(|_| bad("an integer"))?;
                    self.k.get_or_insert(n);
                }
                "trace" => {
                    self.trace.get_or_insert(PathBuf::from(&v));
                }
                "metric-out" => {
                    self.metric_out.get_or_insert(PathBuf::from(&v));
                }
                "deterministic" => self.deterministic |= parse_bool(&v).ok_or_else(|| bad("true or false"))?,
                "slow" => self.slow |= parse_bool(&v).ok_or_else(|| bad("true or false"))?,
                _ => return Err(Error::Parse { line: i + 1, msg: format!("unknown key {:?}", k) }),
            }
        }
        Ok(command)
    }

    fn class_spec(&self) -> Result<&str, Error> {
        self.class.as_deref().ok_or_else(|| Error::InvalidParameter("--class is required".into()))
    }

    fn format(&self, default: Format) -> Result<Format, Error> {
        self.format.as_deref().map(Format::parse).unwrap_or(Ok(default))
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// What a command produced: text for stdout and the exit code.
pub struct Outcome_ {
    pub stdout: String,
    pub code: i32,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) => 3,
        Error::InvalidParameter(_)
        | Error::Parse { .. }
        | Error::InvalidMetric(_)
        | Error::DomainMismatch(_)
        | Error::DuplicateConcept(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

/// Short machine-readable name of an error.
pub fn error_name(e: &Error) -> &'static str {
    match e {
        Error::DomainMismatch(_) => "domain_mismatch",
        Error::DuplicateConcept(_) => "duplicate_concept",
        Error::Parse { .. } => "parse",
        Error::DishonestOracle(_) => "dishonest_oracle",
        Error::EmptyVersionSpace => "empty_version_space",
        Error::RoundLimit(_) => "round_limit",
        Error::NonLearnable => "non_learnable",
        Error::InconsistentOracle(_) => "inconsistent_oracle",
        Error::CapExceeded(_) => "cap_exceeded",
        Error::NotVcdOne => "not_vcd_one",
        Error::OrderingNotFound => "ordering_not_found",
        Error::InvalidMetric(_) => "invalid_metric",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::Io(_) => "io",
    }
}

pub fn error_line(e: &Error) -> String {
    format!("error: code={} exit={} msg={}", error_name(e), exit_code(e), e.to_string().replace('\n', " "))
}

/// Parse arguments, merge the config file and run the command.
pub fn run<I, T>(args: I) -> Result<Outcome_, Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            Error::Io(format!("__display__{}", e))
        }
        _ => Error::InvalidParameter(e.to_string().lines().next().unwrap_or("bad arguments").trim_start_matches("error: ").to_string()),
    })?;
    let mut command = cli.command;
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
        let mut probe = Opts::default();
        let named = probe.merge_config(&text)?;
        if command.is_none() {
            let name = named.ok_or_else(|| Error::InvalidParameter("no subcommand given and config has no command=".into()))?;
            command = Some(Command::from_name(&name).ok_or_else(|| Error::InvalidParameter(format!("unknown command {:?}", name)))?);
        }
        let c = command.as_mut().expect("set above");
        c.opts_mut().merge_config(&text)?;
    }
    let command = command.ok_or_else(|| Error::InvalidParameter("no subcommand given; try --help".into()))?;
    let caps = Caps::from_env()?;
    let name = command.name();
    match command {
        Command::Simulate(o) => cmd_simulate(&o, &caps),
        Command::Complexity(o) => cmd_complexity(&o, &caps),
        Command::Sd(o) => cmd_sd(&o, &caps),
        Command::Vcd(o) => cmd_vcd(&o, &caps),
        Command::Continuous(o) => cmd_continuous(&o),
        Command::Verify(o) => cmd_verify(&o, &caps),
        Command::Table1(o) => cmd_table1(&o),
    }
    .map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::InvalidParameter(format!("{}: {}", name, msg)),
        other => other,
    })
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    match run(std::env::args_os()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            out.code
        }
        Err(Error::Io(msg)) if msg.starts_with("__display__") => {
            print!("{}", &msg["__display__".len()..]);
            0
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}

struct Timer {
    start: Instant,
    deterministic: bool,
}

impl Timer {
    fn start(o: &Opts) -> Self {
        Timer { start: Instant::now(), deterministic: o.deterministic }
    }

    fn ms(&self) -> u64 {
        if self.deterministic {
            0
        } else {
            self.start.elapsed().as_millis() as u64
        }
    }
}

fn value_json(v: Value) -> Json {
    match v {
        Value::Finite(n) => json!(n),
        Value::Unbounded => json!("unbounded"),
    }
}

fn query_name(class: &ConceptClass, q: &Query) -> String {
    match q.radius {
        Some(r) => format!("{}@{}", class.domain().point_name(q.point), r),
        None => class.domain().point_name(q.point),
    }
}

fn load(o: &Opts, caps: &Caps) -> Result<(ClassHandle, CsHandle), Error> {
    let class = parse_class(o.class_spec()?, caps)?;
    let metric = o.metric.as_deref().unwrap_or("hamming");
    let cs = parse_cs(o.cs.as_deref().unwrap_or("min"), &class.class, metric)?;
    Ok((class, cs))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
}

fn cmd_simulate(o: &Opts, caps: &Caps) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let (class, cs) = load(o, caps)?;
    let learner_spec = o.learner.as_deref().ok_or_else(|| Error::InvalidParameter("--learner is required".into()))?;
    let factory = parse_learner(learner_spec, &class, &cs, caps)?;
    let oracle_spec = o.oracle.as_deref().unwrap_or("minimax");
    let mut oracle = parse_oracle(oracle_spec, &class.class, &cs.cs, caps)?;
    let (targets, per_row) = parse_targets(o.targets.as_deref().unwrap_or("all"), class.class.len())?;
    let mut cfg = ProtocolConfig::new(class.class.clone(), cs.cs.clone());
    if let Some(eps) = &o.eps {
        cfg = cfg.approximate(parse_eps_rational(eps)?);
    }
    let mut report = Report::new(o.class_spec()?, "max_queries");
    report
        .param("cs", cs.cs.name())
        .param("learner", learner_spec)
        .param("oracle", oracle.name())
        .param("targets", o.targets.as_deref().unwrap_or("all"));
    if let Some(eps) = &o.eps {
        report.param("eps", eps);
    }
    if per_row {
        report.columns(&["target", "concept", "queries", "outcome", "final_vs"]);
    }
    let mut traces = String::new();
    let (mut max, mut total, mut failures) = (0usize, 0usize, 0usize);
    for &t in &targets {
        let mut learner = factory()?;
        let trace = run_protocol(&cfg, &mut learner, oracle.as_mut(), t)?;
        let q = trace.queries();
        max = max.max(q);
        total += q;
        if trace.outcome == Outcome::Exhausted {
            failures += 1;
        }
        if per_row {
            report.row(vec![
                json!(t),
                json!(class.class.name(t)),
                json!(q),
                json!(format!("{:?}", trace.outcome).to_lowercase()),
                json!(trace.final_vs.len()),
            ]);
        }
        if o.trace.is_some() {
            traces.push_str(&trace.to_jsonl(json!({
                "class": o.class_spec()?,
                "cs": cs.cs.name(),
                "learner": learner_spec,
                "oracle": oracle.name(),
                "target": t,
                "outcome": format!("{:?}", trace.outcome).to_lowercase(),
            })));
        }
    }
    if let Some(path) = &o.trace {
        write_file(path, &traces)?;
    }
    report.value = json!(max);
    report.param("mean_queries", format!("{:.4}", total as f64 / targets.len().max(1) as f64));
    report.param("failures", failures);
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(o.format(Format::Json)?), code: if failures > 0 { 4 } else { 0 } })
}

fn cmd_complexity(o: &Opts, caps: &Caps) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let quantity = o.quantity.as_deref().unwrap_or("contrast");
    let class = parse_class(o.class_spec()?, caps)?;
    let c = class.class.clone();
    let mut report = Report::new(o.class_spec()?, quantity);
    match quantity {
        "contrast" | "mq" => {
            let cs = if quantity == "mq" {
                Arc::new(NoContrast) as Arc<dyn crate::ContrastSet>
            } else {
                parse_cs(o.cs.as_deref().unwrap_or("min"), &c, o.metric.as_deref().unwrap_or("hamming"))?.cs
            };
            report.param("cs", cs.name());
            let mut solver = Solver::new(ContrastGame::new(c.clone(), cs), caps);
            report.value = value_json(solver.root_value()?);
            let full = solver.full_mask();
            let moves = solver.optimal_moves(&full, 0)?;
            report.optimal_first_moves = moves.iter().map(|&m| query_name(&c, &solver.game().queries()[m])).collect();
            report.memo_entries = solver.memo_entries() as u64;
        }
        "exmq" => {
            let mut solver = Solver::new(ExMqGame::new(c.clone()), caps);
            report.value = value_json(solver.root_value()?);
            let full = solver.full_mask();
            let moves = solver.optimal_moves(&full, 0)?;
            report.optimal_first_moves = moves.iter().map(|m| format!("{:?}", m)).collect();
            report.memo_entries = solver.memo_entries() as u64;
        }
        "sd" => {
            let mut solver = SdSolver::new(c.clone(), caps);
            report.value = json!(solver.root_value()?);
            let full = fixedbitset_full(c.len());
            if let Some((x, label)) = solver.best_move(&full)? {
                report.optimal_first_moves = vec![format!("{}:{}", c.domain().point_name(x), label as u8)];
            }
            report.memo_entries = solver.memo_entries() as u64;
        }
        other => return Err(Error::InvalidParameter(format!("unknown quantity {:?}; known: contrast, mq, exmq, sd", other))),
    }
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(o.format(Format::Json)?), code: 0 })
}

fn fixedbitset_full(n: usize) -> fixedbitset::FixedBitSet {
    let mut m = fixedbitset::FixedBitSet::with_capacity(n);
    m.insert_range(..);
    m
}

fn cmd_sd(o: &Opts, caps: &Caps) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let class = parse_class(o.class_spec()?, caps)?;
    let c = class.class.clone();
    let Some(learner_spec) = o.learner.as_deref() else {
        let mut solver = SdSolver::new(c.clone(), caps);
        let mut report = Report::new(o.class_spec()?, "sd");
        report.value = json!(solver.root_value()?);
        report.memo_entries = solver.memo_entries() as u64;
        report.elapsed_ms = timer.ms();
        return Ok(Outcome_ { stdout: report.emit(o.format(Format::Json)?), code: 0 });
    };
    type Factory = Box<dyn Fn() -> Result<Box<dyn SelfDirectedLearner>, Error>>;
    let factory: Factory = match learner_spec {
        "dl" => {
            let m = class.cube_dim()?;
            Box::new(move || Ok(Box::new(SdDecisionListLearner::new(m)) as Box<dyn SelfDirectedLearner>))
        }
        "mdnf" => {
            let m = class.cube_dim()?;
            Box::new(move || Ok(Box::new(SdMdnfLearner::new(m)) as Box<dyn SelfDirectedLearner>))
        }
        "certificate" | "optimal" => {
            let solver = Arc::new(Mutex::new(SdSolver::new(c.clone(), caps)));
            Box::new(move || Ok(Box::new(SdCertificateLearner::new(solver.clone())) as Box<dyn SelfDirectedLearner>))
        }
        s => {
            let inner = s.strip_prefix("from:").ok_or_else(|| {
                Error::InvalidParameter(format!("unknown sd learner {:?}; known: dl, mdnf, certificate, from:<learner>", s))
            })?;
            let cs = parse_cs(o.cs.as_deref().unwrap_or("min"), &c, o.metric.as_deref().unwrap_or("hamming"))?;
            let metric: Metric = cs.metric.clone().ok_or_else(|| Error::InvalidParameter("from:<learner> needs --cs min".into()))?;
            let inner = parse_learner(inner, &class, &cs, caps)?;
            let c = c.clone();
            Box::new(move || Ok(Box::new(SdFromContrast::new(inner()?, c.clone(), metric.clone())?) as Box<dyn SelfDirectedLearner>))
        }
    };
    let (targets, per_row) = parse_targets(o.targets.as_deref().unwrap_or("all"), c.len())?;
    let mut report = Report::new(o.class_spec()?, "max_mistakes");
    report.param("learner", learner_spec);
    if per_row {
        report.columns(&["target", "concept", "mistakes", "mistake_points"]);
    }
    let (mut max, mut total) = (0usize, 0usize);
    let mut traces = String::new();
    for &t in &targets {
        let mut learner = factory()?;
        let run = run_self_directed(learner.as_mut(), c.concept(t))?;
        max = max.max(run.mistakes);
        total += run.mistakes;
        if per_row {
            let points: Vec<String> = run.mistake_points().iter().map(|&x| c.domain().point_name(x)).collect();
            report.row(vec![json!(t), json!(c.name(t)), json!(run.mistakes), json!(points.join(" "))]);
        }
        if o.trace.is_some() {
            let line = json!({ "target": t, "learner": learner_spec, "trace": run });
            traces.push_str(&serde_json::to_string(&line).expect("json"));
            traces.push('\n');
        }
    }
    if let Some(path) = &o.trace {
        write_file(path, &traces)?;
    }
    report.value = json!(max);
    report.param("mean_mistakes", format!("{:.4}", total as f64 / targets.len().max(1) as f64));
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(o.format(Format::Json)?), code: 0 })
}

fn cmd_vcd(o: &Opts, caps: &Caps) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let class = parse_class(o.class_spec()?, caps)?;
    let c = class.class.clone();
    let mut report = Report::new(o.class_spec()?, "vcd");
    let d = vcd(&c);
    report.value = json!(d);
    if d == 1 {
        let cons = vcd1_metric(&c)?;
        report.param("extended_concepts", cons.concepts.len());
        report.columns(&["position", "instance", "bit"]);
        for (i, (&x, &b)) in cons.order.iter().zip(&cons.bits).enumerate() {
            report.row(vec![json!(i + 1), json!(c.domain().point_name(x)), json!(b as u8)]);
        }
        if let Some(path) = &o.metric_out {
            let Metric::Matrix(m) = &cons.metric else {
                return Err(Error::InvalidMetric("constructed metric is not a matrix".into()));
            };
            write_file(path, &m.to_csv())?;
        }
    } else if o.metric_out.is_some() {
        return Err(Error::NotVcdOne);
    }
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(o.format(Format::Json)?), code: 0 })
}

fn parse_setting(s: &str) -> Result<Setting, Error> {
    let spec = spec::Spec::parse(s)?;
    match spec.name.as_str() {
        "threshold" | "thresholds" => Ok(Setting::Thresholds),
        "rect" | "rectangle" | "rectangles" => Ok(Setting::Rectangles { k: spec.usize_or("k", 2)? }),
        other => Err(Error::InvalidParameter(format!("unknown continuous class {:?}; known: threshold, rect:k=K", other))),
    }
}

fn cmd_continuous(o: &Opts) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let setting = parse_setting(o.class_spec()?)?;
    let model = Model::parse(o.model.as_deref().unwrap_or("prox"))?;
    let eps_text = o.eps.as_deref().unwrap_or("2^-6");
    let eps = parse_eps(eps_text)?;
    let adversary = Adversary::parse(o.adversary.as_deref().unwrap_or("farthest"))?;
    let trials = o.trials.unwrap_or(100);
    let seed = o.seed.unwrap_or(0);
    let runs = run_trials(setting, model, eps, trials, seed, adversary)?;
    let mut report = Report::new(o.class_spec()?, "max_queries");
    report
        .param("model", model.name())
        .param("eps", eps_text)
        .param("trials", trials)
        .param("seed", seed)
        .param("adversary", o.adversary.as_deref().unwrap_or("farthest"));
    report.columns(&["trial", "queries", "error"]);
    let mut over = 0;
    for r in &runs {
        report.row(vec![json!(r.trial), json!(r.queries), json!(r.error)]);
        let tolerance = if model == Model::Min { 0.0 } else { eps };
        if r.error > tolerance && adversary != Adversary::Halving {
            over += 1;
        }
    }
    report.value = json!(runs.iter().map(|r| r.queries).max().unwrap_or(0));
    report.param("over_eps", over);
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(o.format(Format::Csv)?), code: if over > 0 { 4 } else { 0 } })
}

fn cmd_verify(o: &Opts, caps: &Caps) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let suite = o.suite.as_deref().unwrap_or("all");
    let trials = o.trials.unwrap_or(50);
    let seed = o.seed.unwrap_or(0);
    let outcomes = verify::run_suite(suite, trials, seed, caps, o.slow)?;
    let mut report = Report::new("-", "violations");
    report.param("suite", suite).param("trials", trials).param("seed", seed).param("slow", o.slow);
    report.columns(&["suite", "checks", "violations", "status", "first_violation"]);
    let mut total = 0;
    for s in &outcomes {
        total += s.violations.len();
        report.row(vec![
            json!(s.name),
            json!(s.checks),
            json!(s.violations.len()),
            json!(if s.passed() { "pass" } else { "FAIL" }),
            json!(s.violations.first().cloned().unwrap_or_default()),
        ]);
    }
    report.value = json!(total);
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(o.format(Format::Json)?), code: if total > 0 { 4 } else { 0 } })
}

fn cmd_table1(o: &Opts) -> Result<Outcome_, Error> {
    let timer = Timer::start(o);
    let exponents: Vec<u32> = o
        .exponents
        .as_deref()
        .unwrap_or("4,6,8")
        .split(',')
        .map(|e| e.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad exponent {:?}", e))))
        .collect::<Result<_, _>>()?;
    let k = o.k.unwrap_or(2);
    let trials = o.trials.unwrap_or(100);
    let seed = o.seed.unwrap_or(0);
    let rows = table1(&exponents, k, trials, seed)?;
    let format = o.format(Format::Text)?;
    let mut report = Report::new("thresholds+rectangles", "max_queries");
    report.param("k", k).param("trials", trials).param("seed", seed);
    if format == Format::Text {
        let mut cols = vec!["setting".to_string(), "model".to_string()];
        cols.extend(exponents.iter().map(|b| format!("eps=2^-{}", b)));
        report.columns = cols;
        for chunk in rows.chunks(exponents.len().max(1)) {
            let mut row = vec![json!(chunk[0].setting), json!(chunk[0].model)];
            row.extend(chunk.iter().map(|r| json!(format!("{} (err {:.2e})", r.max_queries, r.max_error))));
            report.row(row);
        }
        report.value = json!("queries per eps");
    } else {
        report.columns(&["setting", "model", "eps_exponent", "max_queries", "mean_queries", "max_error"]);
        for r in &rows {
            report.row(vec![
                json!(r.setting),
                json!(r.model),
                json!(r.eps_exponent),
                json!(r.max_queries),
                json!(r.mean_queries),
                json!(r.max_error),
            ]);
        }
        report.value = json!(rows.iter().map(|r| r.max_queries).max().unwrap_or(0));
    }
    report.elapsed_ms = timer.ms();
    Ok(Outcome_ { stdout: report.emit(format), code: 0 })
}
