// Exact optimal worst-case query counts for small classes under several
// interaction models.

use std::sync::Arc;

use clab::classes::{gen_monclaus, gen_parity, gen_pmon};
use clab::exact::{exact_contrast_complexity, exact_ex_mq_complexity, exact_mq_complexity, exact_sd_complexity, vcd};
use clab::metrics::Metric;
use clab::oracles::{CsMin, CsProx};
use clab::{Caps, ConceptClass};

fn main() -> clab::Result<()> {
    let caps = Caps::default();
    let classes: Vec<(&str, ConceptClass)> = vec![
        ("pmon m=3", gen_pmon(3, &caps)?),
        ("parity m=3", gen_parity(3, &caps)?),
        ("monclaus m=3", gen_monclaus(3, &caps)?),
    ];
    println!("{:<14} {:>4} {:>4} {:>5} {:>4} {:>5} {:>3} {:>3}", "class", "|C|", "mq", "ex+mq", "min", "prox", "sd", "vcd");
    for (name, class) in classes {
        let class = Arc::new(class);
        let mq = exact_mq_complexity(class.clone(), &caps)?.value;
        let exmq = exact_ex_mq_complexity(class.clone(), &caps)?.value;
        let min = exact_contrast_complexity(class.clone(), Arc::new(CsMin::new(Metric::Hamming)), &caps)?.value;
        let prox = exact_contrast_complexity(class.clone(), Arc::new(CsProx::new(Metric::Hamming)?), &caps)?.value;
        let sd = exact_sd_complexity(class.clone(), &caps)?.value;
        println!("{:<14} {:>4} {:>4} {:>5} {:>4} {:>5} {:>3} {:>3}", name, class.len(), mq.to_string(), exmq.to_string(), min.to_string(), prox.to_string(), sd.to_string(), vcd(&class));
    }
    Ok(())
}
