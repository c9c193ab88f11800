// A contrastive learner run as a self-directed learner: each inner query
// costs at most two mistakes, so SD <= 2 * CS_min.

use std::sync::Arc;

use clab::classes::gen_pmon;
use clab::exact::exact_sd_complexity;
use clab::learners::{run_self_directed, PmonLearner, SdFromContrast};
use clab::metrics::Metric;
use clab::Caps;

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    for m in 2..=4 {
        let class = Arc::new(gen_pmon(m, &caps)?);
        let mut worst = 0;
        for t in 0..class.len() {
            let mut learner = SdFromContrast::new(PmonLearner::new(m), class.clone(), Metric::Hamming)?;
            let run = run_self_directed(&mut learner, class.concept(t))?;
            worst = worst.max(run.mistakes);
        }
        let sd = exact_sd_complexity(class, &caps)?.value;
        println!("pmon m={} simulated worst mistakes={} exact SD={}", m, worst, sd);
    }
    Ok(())
}
