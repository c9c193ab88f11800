//! Constructive learners for the contrastive protocol, transformers between
//! models, and self-directed learners.

pub mod certificate;
pub mod d0;
pub mod halving;
pub mod injective;
pub mod mdnf;
pub mod mon_claus;
pub mod pmon;
pub mod prox;
pub mod sd;
pub mod vcd1;

use crate::domain::{Concept, VersionSpace};
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::protocol::{
    restrict_version_space, Contrast, CsContext, Learner, OracleAnswer, ProtocolConfig, Query,
};

pub use certificate::CertificateLearner;
pub use d0::{run_ex_mq, ContrastFromExMq, ExMqAnswer, ExMqCertificateLearner, ExMqFromContrast, ExMqLearner};
pub use halving::HalvingLearner;
pub use injective::InjectiveLearner;
pub use mdnf::MdnfDynamicLearner;
pub use mon_claus::MonClausLearner;
pub use pmon::PmonLearner;
pub use prox::ProxFromMin;
pub use sd::{
    run_self_directed, SdCertificateLearner, SdDecisionListLearner, SdFromContrast, SdMdnfLearner, SdStep, SdTrace,
    SelfDirectedLearner,
};
pub use vcd1::{vcd1_metric, Vcd1Construction, Vcd1Learner};

/// Whether `answer` is an honest minimum-distance reply for `concept` under
/// a static metric.
pub fn honest_min_answer(concept: &Concept, metric: &Metric, query: usize, answer: &OracleAnswer) -> bool {
    if concept.label(query) != answer.label {
        return false;
    }
    let nearest = (0..concept.len())
        .filter(|&y| concept.label(y) != answer.label)
        .map(|y| metric.fixed(query, y))
        .min();
    match (answer.contrast, nearest) {
        (Contrast::Omega, None) => true,
        (Contrast::Point { x, label }, Some(d)) => {
            concept.label(x) == label && label != answer.label && metric.fixed(query, x) == d
        }
        _ => false,
    }
}

/// Largest number of queries `learner` needs over the given targets and
/// every sequence of honest oracle choices. `None` when some branch leaves
/// the learner stopped with more than one concept.
pub fn worst_case_queries<L: Learner + Clone>(
    cfg: &ProtocolConfig,
    learner: &L,
    targets: impl IntoIterator<Item = usize>,
) -> Result<Option<usize>> {
    let mut worst = 0;
    for t in targets {
        let vs = VersionSpace::full(cfg.class.clone());
        match explore(cfg, learner.clone(), vs, t, 0)? {
            Some(q) => worst = worst.max(q),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

fn explore<L: Learner + Clone>(
    cfg: &ProtocolConfig,
    mut learner: L,
    vs: VersionSpace,
    target: usize,
    round: usize,
) -> Result<Option<usize>> {
    if vs.len() == 1 {
        return Ok(Some(0));
    }
    if round >= cfg.max_rounds() {
        return Err(Error::RoundLimit(cfg.max_rounds()));
    }
    let Some(query) = learner.next_query(&vs)? else {
        return Ok(None);
    };
    let class = cfg.class.clone();
    let concept = class.concept(target);
    let label = concept.label(query.point);
    let ctx = CsContext { class: &class, concept: target, vs: &vs, round };
    let admissible = cfg.cs.contrast_set(&query, &ctx);
    let answers: Vec<OracleAnswer> = if admissible.is_empty() {
        vec![OracleAnswer::omega(label)]
    } else {
        admissible.iter().map(|&x| OracleAnswer::point(label, x, concept.label(x))).collect()
    };
    let mut worst = 0;
    for answer in answers {
        let next = restrict_version_space(&vs, &query, &answer, cfg.cs.as_ref(), round);
        let mut branch = learner.clone();
        branch.observe(&query, &answer, &next)?;
        match explore(cfg, branch, next, target, round + 1)? {
            Some(q) => worst = worst.max(q + 1),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

/// Query at the all-zero point of `B_m`.
pub(crate) fn zero_query() -> Query {
    Query::at(0)
}
