//! Embed feature vectors of several problems in two dimensions and check
//! that instances of the same problem land together.
//!
//! cargo run --release --example similarity_map

use landscape_atlas::corpus;
use landscape_atlas::ela::normalize_features;
use landscape_atlas::similarity::{cohesion, tsne_embed, TsneConfig};
use landscape_atlas::ProblemId;

fn main() -> landscape_atlas::Result<()> {
    let mut jobs = Vec::new();
    for name in ["m1", "m7", "m11", "m23", "sphere", "rastrigin", "shekel-5"] {
        let id: ProblemId = name.parse()?;
        for seed in 1..=5 {
            jobs.push((id, seed));
        }
    }
    let records = corpus::feature_records(&jobs, 5, 250, 1, 1)?;
    let fv: Vec<_> = records.iter().map(|r| r.features.clone()).collect();
    let norm = normalize_features(&fv)?;
    println!(
        "{} rows, {} non-constant features",
        norm.rows.len(),
        norm.names.len()
    );

    let config = TsneConfig {
        perplexity: 8.0,
        ..TsneConfig::default()
    };
    let e = tsne_embed(&norm.rows, &config)?;
    for c in e.kl_trace()?.iter().step_by(4) {
        println!("iter {:>4}  KL {:.4}", c.iteration, c.kl);
    }
    let groups: Vec<&str> = records.iter().map(|r| r.problem.as_str()).collect();
    let (intra, inter) = cohesion(&e.coords, &groups);
    println!("mean distance within a problem {intra:.2}, between problems {inter:.2}");
    for (r, c) in records.iter().zip(&e.coords).step_by(5) {
        println!("{:>10} {:>8.2} {:>8.2}", r.problem, c[0], c[1]);
    }
    Ok(())
}
