// Classes of VC dimension 1 become learnable with two queries under a
// metric built from an elimination ordering.

use std::sync::Arc;

use clab::classes::vcd1_example;
use clab::exact::{exact_contrast_complexity, exact_sd_complexity, vcd};
use clab::learners::{vcd1_metric, worst_case_queries, Vcd1Learner};
use clab::metrics::Metric;
use clab::oracles::CsMin;
use clab::{Caps, ProtocolConfig};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    let class = Arc::new(vcd1_example());
    println!("{}", class.to_spec());
    println!("VCD={} SD={}", vcd(&class), exact_sd_complexity(class.clone(), &caps)?.value);
    for metric in [Metric::Hamming, Metric::Discrete, Metric::GridL1 { dims: vec![3] }] {
        let v = exact_contrast_complexity(class.clone(), Arc::new(CsMin::new(metric.clone())), &caps)?.value;
        println!("  {:<10} CS_min={}", metric.name(), v);
    }
    let cons = Arc::new(vcd1_metric(&class)?);
    println!("ordering {:?} bits {:?}", cons.order, cons.bits);
    let cfg = ProtocolConfig::new(class.clone(), Arc::new(CsMin::new(cons.metric.clone())));
    let worst = worst_case_queries(&cfg, &Vcd1Learner::new(cons.clone()), 0..class.len())?;
    println!("constructed metric: learner worst={:?}", worst);
    Ok(())
}
