//! Contrastive learning lab: exact and simulated query complexity of
//! learning with contrastive examples.
//!
//! A learner queries an instance `x` (and a radius in the proximity model);
//! the oracle returns the label of `x` together with a contrastive example
//! drawn from a contrast set `CS(x, C*, vs)` or `omega` when that set is
//! empty. The crate provides:
//!
//! * [`domain`] and [`protocol`]: domains, concepts, version spaces and the
//!   interaction engine,
//! * [`classes`]: Boolean class generators,
//! * [`metrics`] and [`oracles`]: distances, contrast sets and adversaries,
//! * [`learners`]: the constructive learners and self-directed learners,
//! * [`exact`]: memoised game-value search for exact complexities,
//! * [`continuous`]: thresholds and rectangles over `[0, 1]^k`,
//! * [`cli`]: the `clab` command line.
//!
//! Every capability has a runnable example, e.g.
//! `cargo run --example pmon_single_query`.

pub mod caps;
pub mod classes;
pub mod cli;
pub mod continuous;
pub mod domain;
pub mod error;
pub mod exact;
pub mod learners;
pub mod metrics;
pub mod oracles;
pub mod protocol;

pub use caps::Caps;
pub use domain::{delta, Concept, ConceptClass, FiniteDomain, Rational, VersionSpace};
pub use error::{Error, Result};
pub use protocol::{
    restrict_version_space, run_protocol, Contrast, ContrastSet, Learner, OracleAnswer, OracleStrategy, Outcome,
    ProtocolConfig, Query, Trace,
};
