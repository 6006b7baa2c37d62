//! Decode a latent vector into a level and score it with the tile measures.
//!
//! cargo run --example decode_level -- [problem] [instance]

use landscape_atlas::fitness;
use landscape_atlas::rng;
use landscape_atlas::{resolve, ProblemId};
use rand::Rng;

fn main() -> landscape_atlas::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let id: ProblemId = args.get(1).map_or("m13", String::as_str).parse()?;
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let inst = resolve(id, seed, 10)?;
    let m = inst
        .mario()
        .expect("choose a level-generation problem (m1..m28)");

    let mut r = rng::stream("example", &[seed]);
    let z: Vec<f64> = (0..10).map(|_| r.random_range(-1.0..1.0)).collect();
    let level = m.level(&z)?;
    println!(
        "{id} ({} {}): {} segment(s)",
        m.spec().measure.name(),
        m.spec().variant(),
        m.segments()
    );
    println!("{}\n", level.render_ascii());

    println!(
        "enemyDistribution    {:.4}",
        fitness::enemy_distribution(&level)
    );
    println!(
        "positionDistribution {:.4}",
        fitness::position_distribution(&level)
    );
    println!(
        "decorationFrequency  {:.4}",
        fitness::decoration_frequency(&level)
    );
    println!(
        "negativeSpace        {:.4}",
        fitness::negative_space(&level)
    );
    let len = fitness::leniency(&level);
    println!(
        "leniency             {:.4}  ({} gaps)",
        len.value, len.gaps.n_gaps
    );
    println!("objective {id}          {:.4}", inst.evaluate(&z)?);
    Ok(())
}
