// One query at the all-zeros point identifies any monotone monomial under
// the minimum-distance Hamming contrast set.

use std::sync::Arc;

use clab::classes::gen_pmon;
use clab::exact::{exact_contrast_complexity, MinimaxOracle};
use clab::learners::PmonLearner;
use clab::metrics::Metric;
use clab::oracles::CsMin;
use clab::{run_protocol, Caps, ContrastSet, ProtocolConfig};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    let m = 3;
    let class = Arc::new(gen_pmon(m, &caps)?);
    let cs: Arc<dyn ContrastSet> = Arc::new(CsMin::new(Metric::Hamming));
    let cfg = ProtocolConfig::new(class.clone(), cs.clone());
    let mut oracle = MinimaxOracle::new(class.clone(), cs.clone(), &caps);
    for t in 0..class.len() {
        let trace = run_protocol(&cfg, &mut PmonLearner::new(m), &mut oracle, t)?;
        let r = &trace.records[0];
        println!("{:<10} query {} answer {} -> {} queries", class.name(t), r.query.point, r.answer, trace.queries());
    }
    let value = exact_contrast_complexity(class, cs, &caps)?.value;
    println!("exact optimum: {}", value);
    Ok(())
}
