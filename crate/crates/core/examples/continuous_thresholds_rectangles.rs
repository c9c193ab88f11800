// Thresholds and rectangles over [0,1]^k: the minimum-distance oracle
// reveals the target outright, the proximity oracle needs a radius search.

use clab::continuous::{
    rect_min_learner, rect_prox_budget, rect_prox_learner, threshold_min_learner, threshold_prox_budget,
    threshold_prox_learner, Adversary, RectOracle, Rectangle, Threshold, ThresholdOracle,
};

fn main() -> clab::Result<()> {
    let target = Threshold::new(0.375)?;
    let run = threshold_min_learner(&mut ThresholdOracle::new(target, Adversary::Farthest));
    println!("threshold min: theta={} queries={}", run.estimate.theta, run.queries);
    for b in [4, 6, 10] {
        let eps = 2f64.powi(-b);
        let run = threshold_prox_learner(&mut ThresholdOracle::new(target, Adversary::Random(5)), eps);
        println!("threshold prox eps=2^-{}: queries={} budget={} error={}", b, run.queries, threshold_prox_budget(eps), run.error);
    }
    let rect = Rectangle::new(vec![0.25, 0.375], vec![0.5, 0.75])?;
    let run = rect_min_learner(&mut RectOracle::new(rect.clone(), Adversary::Farthest)?);
    println!("rect min: {:?}..{:?} queries={}", run.estimate.low, run.estimate.high, run.queries);
    let eps = 2f64.powi(-6);
    let run = rect_prox_learner(&mut RectOracle::new(rect, Adversary::Nearest)?, eps);
    println!("rect prox eps=2^-6: queries={} budget={} error={}", run.queries, rect_prox_budget(2, eps), run.error);
    Ok(())
}
