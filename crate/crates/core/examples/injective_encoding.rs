// Contrast sets from an injective map of concepts to instance sets: the
// learner walks the enumeration and skips past each returned instance.

use std::sync::Arc;

use clab::classes::gen_singletons;
use clab::exact::MinimaxOracle;
use clab::learners::InjectiveLearner;
use clab::oracles::CsInjective;
use clab::{run_protocol, Caps, ContrastSet, ProtocolConfig};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    let class = Arc::new(gen_singletons(5, &caps)?);
    // concept i maps to {i, (i + 2) mod 5}
    let map = "enumeration 4 3 2 1 0\n0 2\n1 3\n2 4\n3 0\n4 1\n";
    let cs = Arc::new(CsInjective::parse(&class, map)?);
    let dyn_cs: Arc<dyn ContrastSet> = cs.clone();
    let cfg = ProtocolConfig::new(class.clone(), dyn_cs.clone());
    let mut oracle = MinimaxOracle::new(class.clone(), dyn_cs, &caps);
    for t in 0..class.len() {
        let trace = run_protocol(&cfg, &mut InjectiveLearner::new(cs.clone()), &mut oracle, t)?;
        let answers: Vec<String> = trace.records.iter().map(|r| format!("x{}->{}", r.query.point, r.answer)).collect();
        println!("target {} {:?}: {}", class.name(t), trace.outcome, answers.join(" "));
    }
    Ok(())
}
