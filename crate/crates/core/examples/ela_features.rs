//! Latin hypercube sample plus the full feature vector for a problem.
//!
//! cargo run --release --example ela_features -- [problem] [dim]

use landscape_atlas::ela::{compute_features, lhs_sample, nearest_better_ratio, quadratic_fit};
use landscape_atlas::{resolve, ProblemId};

fn main() -> landscape_atlas::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let id: ProblemId = args.get(1).map_or("rastrigin", String::as_str).parse()?;
    let d: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5);
    let inst = resolve(id, 1, d)?;
    let sample = lhs_sample(&inst, 50 * d, 7)?;

    println!("{id} d={d} n={}", sample.n());
    println!("quadratic R2       {:.4}", quadratic_fit(&sample)?.r2);
    println!("nearest-better     {:.4}", nearest_better_ratio(&sample)?);

    let fv = compute_features(&sample, 1)?;
    for (name, v) in fv.names().iter().zip(&fv.values) {
        println!("{name:<24} {v:>12.5}");
    }
    if !fv.degenerate.is_empty() {
        println!("fallbacks used: {:?}", fv.degenerate);
    }
    Ok(())
}
