use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

use super::{train, LabelledRow, Property};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fold {
    pub held_out: String,
    pub n_test: usize,
    pub accuracy: f64,
    /// `(function, instance)` of every training row.
    pub training_rows: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub property: String,
    pub folds: Vec<Fold>,
    pub mean_accuracy: f64,
}

fn groups(rows: &[LabelledRow]) -> Result<Vec<String>> {
    let g: BTreeSet<&str> = rows.iter().map(|r| r.function.as_str()).collect();
    if g.len() < 3 {
        return Err(Error::TooFewGroups {
            needed: 3,
            got: g.len(),
        });
    }
    Ok(g.into_iter().map(String::from).collect())
}

fn run_folds(
    rows: &[LabelledRow],
    property: Property,
    mut fit_predict: impl FnMut(&[LabelledRow], &[&LabelledRow]) -> Result<Vec<usize>>,
) -> Result<CvReport> {
    let mut folds = Vec::new();
    for held_out in groups(rows)? {
        let (test, train_rows): (Vec<&LabelledRow>, Vec<&LabelledRow>) =
            rows.iter().partition(|r| r.function == held_out);
        let train_rows: Vec<LabelledRow> = train_rows.into_iter().cloned().collect();
        let predicted = fit_predict(&train_rows, &test)?;
        let correct = predicted
            .iter()
            .zip(&test)
            .filter(|(p, r)| **p == r.label)
            .count();
        folds.push(Fold {
            held_out,
            n_test: test.len(),
            accuracy: correct as f64 / test.len() as f64,
            training_rows: train_rows
                .iter()
                .map(|r| (r.function.clone(), r.instance))
                .collect(),
        });
    }
    let mean_accuracy = folds.iter().map(|f| f.accuracy).sum::<f64>() / folds.len() as f64;
    Ok(CvReport {
        property: property.name().into(),
        folds,
        mean_accuracy,
    })
}

/// Leave-one-function-out cross-validation of the forest; one fold per
/// source function.
pub fn lofo_cv(
    rows: &[LabelledRow],
    feature_names: &[&str],
    property: Property,
    train_seed: u64,
    n_trees: usize,
) -> Result<CvReport> {
    run_folds(rows, property, |train_rows, test| {
        let model = train(train_rows, feature_names, property, train_seed, n_trees)?;
        Ok(test
            .iter()
            .map(|r| model.predict_values(&r.features).label_index)
            .collect())
    })
}

/// The same folds with a predictor that always answers the training
/// majority (ties to the earlier vocabulary entry).
pub fn majority_lofo(rows: &[LabelledRow], property: Property) -> Result<CvReport> {
    let classes = property.vocabulary().len();
    run_folds(rows, property, |train_rows, test| {
        let mut counts = vec![0usize; classes];
        for r in train_rows {
            counts[r.label] += 1;
        }
        let best = (0..classes).fold(0, |b, c| if counts[c] > counts[b] { c } else { b });
        Ok(vec![best; test.len()])
    })
}
