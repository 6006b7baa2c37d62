//! Train property classifiers on the labelled baseline functions, check them
//! by leave-one-function-out, then label a few level-generation problems.
//!
//! cargo run --release --example property_classifier

use landscape_atlas::corpus::{self, feature_record};
use landscape_atlas::ela::FEATURE_NAMES;
use landscape_atlas::properties::{lofo_cv, majority_lofo, train, LabelTable, Property};

fn main() -> landscape_atlas::Result<()> {
    let (d, n) = (10, 500);
    let records = corpus::feature_records(&corpus::labelled_jobs(), d, n, 1, 1)?;
    let table = LabelTable::builtin();
    let targets: Vec<_> = ["m1", "m7", "m11", "m15"]
        .iter()
        .map(|m| feature_record(m.parse().unwrap(), 1, d, n, 1, 1))
        .collect::<Result<_, _>>()?;

    for property in [
        Property::Multimodality,
        Property::Separability,
        Property::Funnel,
    ] {
        let rows = corpus::labelled_rows(&records, &table, property)?;
        let cv = lofo_cv(&rows, &FEATURE_NAMES, property, 1, 100)?;
        let base = majority_lofo(&rows, property)?;
        println!(
            "{property}: lofo accuracy {:.3} (majority {:.3})",
            cv.mean_accuracy, base.mean_accuracy
        );
        let model = train(&rows, &FEATURE_NAMES, property, 1, 100)?;
        for t in &targets {
            let p = model.predict(&t.features)?;
            println!(
                "  {:>4} -> {:<7} share {:.2}",
                t.problem, p.label, p.vote_shares[p.label_index]
            );
        }
    }
    Ok(())
}
