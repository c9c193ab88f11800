// Monomials and clauses together: two queries (all-ones, then all-zeros
// or the returned point) suffice for every target and every honest answer.

use std::sync::Arc;

use clab::classes::{gen_claus, gen_dl, gen_mon};
use clab::learners::{worst_case_queries, MonClausLearner};
use clab::metrics::Metric;
use clab::oracles::CsMin;
use clab::{Caps, ConceptClass, FiniteDomain, ProtocolConfig};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    for m in 2..=4 {
        let mon = gen_mon(m, &caps)?;
        let claus = gen_claus(m, &caps)?;
        let both = ConceptClass::dedup(
            FiniteDomain::cube(m),
            mon.concepts().iter().chain(claus.concepts()).map(|c| (c.clone(), c.bit_string())).collect::<Vec<_>>(),
        )?;
        let dl1 = gen_dl(m, 1, &caps)?;
        println!("m={} |mon u claus|={} |DL^1|={}", m, both.len(), dl1.len());
        let class = Arc::new(dl1);
        let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(Metric::Hamming)));
        let worst = worst_case_queries(&cfg, &MonClausLearner::new(m), 0..class.len())?;
        println!("  worst case over all targets and answers: {:?}", worst);
    }
    Ok(())
}
