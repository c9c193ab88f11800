// The primed extension of monotone monomials: membership, minimum-distance
// and proximity queries all need `m` rounds.

use std::sync::Arc;

use clab::classes::gen_primed_pmon;
use clab::exact::{exact_contrast_complexity, exact_mq_complexity};
use clab::metrics::Metric;
use clab::oracles::{CsMin, CsProx};
use clab::Caps;

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    for m in 1..=2 {
        let class = Arc::new(gen_primed_pmon(m, &caps)?);
        let mq = exact_mq_complexity(class.clone(), &caps)?.value;
        let min = exact_contrast_complexity(class.clone(), Arc::new(CsMin::new(Metric::Hamming)), &caps)?.value;
        let prox = exact_contrast_complexity(class.clone(), Arc::new(CsProx::new(Metric::Hamming)?), &caps)?.value;
        println!("m={} |C|={} mq={} min={} prox={}", m, class.len(), mq, min, prox);
    }
    Ok(())
}
