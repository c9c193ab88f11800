// Monotone DNF: s mistakes self-directed, and s queries under the
// version-space-induced distance.

use std::sync::Arc;

use clab::classes::gen_mdnf;
use clab::exact::exact_sd_complexity;
use clab::learners::{run_self_directed, worst_case_queries, MdnfDynamicLearner, SdMdnfLearner};
use clab::metrics::Metric;
use clab::oracles::CsMin;
use clab::{Caps, ProtocolConfig};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    for (m, s, z) in [(3, 2, 2), (4, 2, 1), (4, 2, 2)] {
        let class = Arc::new(gen_mdnf(m, s, z, &caps)?);
        let mut mistakes = 0;
        for t in 0..class.len() {
            mistakes = mistakes.max(run_self_directed(&mut SdMdnfLearner::new(m), class.concept(t))?.mistakes);
        }
        let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(Metric::VersionSpaceInduced)));
        let queries = worst_case_queries(&cfg, &MdnfDynamicLearner::new(m, s), 0..class.len())?;
        let sd = exact_sd_complexity(class.clone(), &caps)?.value;
        println!("mdnf({},{},{}) |C|={} SD={} sd-learner={} dynamic-learner={:?}", m, s, z, class.len(), sd, mistakes, queries);
    }
    Ok(())
}
