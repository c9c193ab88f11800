// Turning a minimum-distance learner into a proximity learner by searching
// over radii.

use std::sync::Arc;

use clab::classes::{gen_monclaus, gen_pmon};
use clab::learners::{worst_case_queries, MonClausLearner, PmonLearner, ProxFromMin};
use clab::metrics::{spectrum_size, Metric};
use clab::oracles::CsProx;
use clab::{Caps, ProtocolConfig};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    for m in 2..=5 {
        let class = Arc::new(gen_monclaus(m, &caps)?);
        let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsProx::new(Metric::Hamming)?));
        let learner = ProxFromMin::new(MonClausLearner::new(m), class.clone(), Metric::Hamming)?;
        let worst = worst_case_queries(&cfg, &learner, 0..class.len())?;
        let budget = 2 * (usize::BITS - (m - 1).leading_zeros());
        println!("monclaus m={} s_d={} worst={:?} budget={}", m, spectrum_size(&Metric::Hamming, class.n()), worst, budget);
    }
    let class = Arc::new(gen_pmon(4, &caps)?);
    let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsProx::new(Metric::Hamming)?));
    let learner = ProxFromMin::new(PmonLearner::new(4), class.clone(), Metric::Hamming)?;
    println!("pmon m=4 worst={:?}", worst_case_queries(&cfg, &learner, 0..class.len())?);
    Ok(())
}
