//! Walk straight lines through a shared anchor and report how often the
//! objective changes, for a tile measure and the two simulation agents.
//!
//! cargo run --release --example diagonal_walks

use landscape_atlas::walk::{default_step, walk_bundle, WalkTrace};
use landscape_atlas::{resolve, ProblemId};

fn summarise(traces: &[WalkTrace]) -> (usize, usize, f64) {
    let mut steps = 0;
    let mut changes = 0;
    let mut total = 0.0;
    for t in traces {
        for w in t.values.windows(2) {
            steps += 1;
            if w[0] != w[1] {
                changes += 1;
            }
            total += (w[1] - w[0]).abs();
        }
    }
    (steps, changes, total / steps.max(1) as f64)
}

fn main() -> landscape_atlas::Result<()> {
    let anchor_seed = 42;
    for name in ["m7", "m11", "m15"] {
        let inst = resolve(name.parse::<ProblemId>()?, 1, 10)?;
        let step = default_step(inst.domain());
        let traces = walk_bundle(&inst, anchor_seed, 3, step)?;
        let (steps, changes, mad) = summarise(&traces);
        println!(
            "{name:>4}: {} walks, {steps} steps, value changed on {changes}, mean |diff| {mad:.5}",
            traces.len()
        );
    }
    // all three problems share the same box, so the walks pass through the
    // same anchor
    let a = resolve("m11".parse()?, 1, 10)?;
    let t = &walk_bundle(&a, anchor_seed, 1, default_step(a.domain()))?[0];
    println!("anchor {:?}", &t.anchor()[..3]);
    Ok(())
}
