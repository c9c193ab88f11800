// Self-directed learning of decision lists block by block.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use clab::classes::{blocks_of, DecisionList};
use clab::learners::{run_self_directed, SdDecisionListLearner};

fn main() -> clab::Result<()> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
    for _ in 0..8 {
        let m = 5;
        let list = DecisionList::random(m, &mut rng);
        let k = blocks_of(&list).len().max(1);
        let run = run_self_directed(&mut SdDecisionListLearner::new(m), &list.to_concept())?;
        println!("{:<40} blocks={} mistakes={} bound={}", list.to_string(), k, run.mistakes, 4 * k * m);
    }
    Ok(())
}
