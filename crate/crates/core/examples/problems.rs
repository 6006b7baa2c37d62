//! Resolve problems from the registry and evaluate points.
//!
//! cargo run --example problems

use landscape_atlas::{resolve, ProblemId};

fn main() -> landscape_atlas::Result<()> {
    let ids = ProblemId::all();
    println!("{} registered problems", ids.len());

    for name in ["sphere", "rastrigin", "shekel-10", "m7", "m11", "m13"] {
        let id: ProblemId = name.parse()?;
        let inst = resolve(id, 1, 10)?;
        let d = inst.domain();
        let centre: Vec<f64> = d
            .lower()
            .iter()
            .zip(d.upper())
            .map(|(l, u)| 0.5 * (l + u))
            .collect();
        println!(
            "{name:>10}  family={:<8} box=[{}, {}]  f(centre)={:.6}",
            id.family(),
            d.lower()[0],
            d.upper()[0],
            inst.evaluate(&centre)?
        );
    }

    // points outside the box are rejected, not clamped
    let inst = resolve("m1".parse()?, 1, 10)?;
    let err = inst.evaluate(&[2.0; 10]).unwrap_err();
    println!("out of box: {err}");
    Ok(())
}
