// Under the discrete metric every opposite-label point is a valid
// contrastive example; the complexity sits within 2 of the
// positive/negative-example-plus-membership model.

use std::sync::Arc;

use clab::classes::{gen_pmon, gen_singletons};
use clab::exact::{exact_contrast_complexity, exact_ex_mq_complexity, exact_mq_complexity};
use clab::metrics::Metric;
use clab::oracles::CsMin;
use clab::Caps;

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    let classes = [
        ("singletons n=4", Arc::new(gen_singletons(4, &caps)?)),
        ("singletons n=6", Arc::new(gen_singletons(6, &caps)?)),
        ("pmon m=3", Arc::new(gen_pmon(3, &caps)?)),
    ];
    for (name, class) in classes {
        let d0 = exact_contrast_complexity(class.clone(), Arc::new(CsMin::new(Metric::Discrete)), &caps)?.value;
        let exmq = exact_ex_mq_complexity(class.clone(), &caps)?.value;
        let mq = exact_mq_complexity(class, &caps)?.value;
        println!("{:<15} d0={} ex+mq={} mq={}", name, d0, exmq, mq);
    }
    Ok(())
}
