//! Random forest classifier (Gini splits, bootstrap, random feature subsets).

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ela::{FeatureVector, FEATURE_NAMES};
use crate::error::{Error, Result};
use crate::rng;

use super::{LabelledRow, Property};

pub const DEFAULT_TREES: usize = 200;
pub const MODEL_SCHEMA_VERSION: u32 = 1;
const MIN_TRAIN_ROWS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        counts: Vec<u32>,
    },
}

/// Nodes in creation order; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    fn leaf(&self, x: &[f64]) -> &[u32] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
                Node::Leaf { counts } => return counts,
            }
        }
    }

    fn vote(&self, x: &[f64]) -> usize {
        argmax(self.leaf(x).iter().map(|c| *c as f64))
    }
}

/// First index of the maximum.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyModel {
    pub schema_version: u32,
    pub property: String,
    pub vocabulary: Vec<String>,
    pub feature_names: Vec<String>,
    pub train_seed: u64,
    pub training_rows: usize,
    pub training_accuracy: f64,
    pub trees: Vec<Tree>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub label: String,
    pub label_index: usize,
    /// One share per vocabulary entry; sums to 1.
    pub vote_shares: Vec<f64>,
}

fn gini(counts: &[u32], total: u32) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / t).powi(2)).sum::<f64>()
}

struct Grower<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    classes: usize,
    mtry: usize,
    nodes: Vec<Node>,
}

impl Grower<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<u32> {
        let mut c = vec![0u32; self.classes];
        for &i in idx {
            c[self.y[i]] += 1;
        }
        c
    }

    /// Best (weighted impurity, threshold) split on one feature.
    fn best_on(&self, idx: &[usize], f: usize) -> Option<(f64, f64)> {
        let mut pairs: Vec<(f64, usize)> = idx.iter().map(|&i| (self.x[i][f], self.y[i])).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let m = pairs.len() as u32;
        let mut left = vec![0u32; self.classes];
        let mut right = vec![0u32; self.classes];
        for (_, c) in &pairs {
            right[*c] += 1;
        }
        let mut best: Option<(f64, f64)> = None;
        for k in 0..pairs.len() - 1 {
            let c = pairs[k].1;
            left[c] += 1;
            right[c] -= 1;
            let (a, b) = (pairs[k].0, pairs[k + 1].0);
            if a == b {
                continue;
            }
            let nl = k as u32 + 1;
            let nr = m - nl;
            let score = (nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr)) / m as f64;
            if best.is_none_or(|(s, _)| score < s) {
                let mid = a + (b - a) / 2.0;
                let threshold = if mid < b { mid } else { a };
                best = Some((score, threshold));
            }
        }
        best
    }

    fn grow(&mut self, idx: Vec<usize>, rng: &mut ChaCha8Rng) -> usize {
        let counts = self.counts(&idx);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            counts: counts.clone(),
        });
        if counts.iter().filter(|c| **c > 0).count() <= 1 {
            return id;
        }
        let n_features = self.x[0].len();
        let mut order: Vec<usize> = (0..n_features).collect();
        order.shuffle(rng);
        let mut best: Option<(f64, usize, f64)> = None;
        // examine mtry features, continuing past them only while none splits
        for (rank, &f) in order.iter().enumerate() {
            if rank >= self.mtry && best.is_some() {
                break;
            }
            if let Some((score, threshold)) = self.best_on(&idx, f) {
                if best.is_none_or(|(s, _, _)| score < s) {
                    best = Some((score, f, threshold));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.x[i][feature] <= threshold);
        let left = self.grow(l, rng);
        let right = self.grow(r, rng);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }
}

fn grow_tree(x: &[Vec<f64>], y: &[usize], classes: usize, seed: u64, tree: u64) -> Tree {
    let mut rng = rng::stream("forest", &[seed, tree]);
    let n = x.len();
    let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut g = Grower {
        x,
        y,
        classes,
        mtry: (x[0].len() as f64).sqrt().ceil() as usize,
        nodes: Vec::new(),
    };
    g.grow(sample, &mut rng);
    Tree { nodes: g.nodes }
}

/// Grow a forest for `property`. Rows are put in a canonical order first,
/// so the model does not depend on the order they were supplied in.
pub fn train(
    rows: &[LabelledRow],
    feature_names: &[&str],
    property: Property,
    train_seed: u64,
    n_trees: usize,
) -> Result<PropertyModel> {
    if rows.len() < MIN_TRAIN_ROWS {
        return Err(Error::TooFewRows {
            needed: MIN_TRAIN_ROWS,
            got: rows.len(),
        });
    }
    if let Some(r) = rows
        .iter()
        .find(|r| r.features.len() != feature_names.len())
    {
        return Err(Error::ManifestMismatch(format!(
            "row {}#{} has {} features, manifest has {}",
            r.function,
            r.instance,
            r.features.len(),
            feature_names.len()
        )));
    }
    let classes = property.vocabulary().len();
    if let Some(r) = rows.iter().find(|r| r.label >= classes) {
        return Err(Error::UnknownLabel {
            property: property.name().into(),
            label: r.label.to_string(),
        });
    }
    let mut ordered: Vec<&LabelledRow> = rows.iter().collect();
    ordered.sort_by(|a, b| {
        a.function
            .cmp(&b.function)
            .then(a.instance.cmp(&b.instance))
            .then_with(|| {
                let ka: Vec<u64> = a.features.iter().map(|v| v.to_bits()).collect();
                let kb: Vec<u64> = b.features.iter().map(|v| v.to_bits()).collect();
                ka.cmp(&kb)
            })
            .then(a.label.cmp(&b.label))
    });
    let x: Vec<Vec<f64>> = ordered.iter().map(|r| r.features.clone()).collect();
    let y: Vec<usize> = ordered.iter().map(|r| r.label).collect();
    if y.iter().all(|l| *l == y[0]) {
        return Err(Error::SingleClass);
    }
    let trees: Vec<Tree> = (0..n_trees.max(1) as u64)
        .into_par_iter()
        .map(|t| grow_tree(&x, &y, classes, train_seed, t))
        .collect();
    let mut model = PropertyModel {
        schema_version: MODEL_SCHEMA_VERSION,
        property: property.name().into(),
        vocabulary: property
            .vocabulary()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        feature_names: feature_names.iter().map(|s| s.to_string()).collect(),
        train_seed,
        training_rows: rows.len(),
        training_accuracy: 0.0,
        trees,
    };
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(row, l)| model.predict_values(row).label_index == **l)
        .count();
    model.training_accuracy = correct as f64 / x.len() as f64;
    Ok(model)
}

impl PropertyModel {
    pub fn property(&self) -> Result<Property> {
        self.property.parse()
    }

    /// Majority vote over trees, ties to the earlier vocabulary entry.
    pub fn predict_values(&self, x: &[f64]) -> Prediction {
        let mut votes = vec![0usize; self.vocabulary.len()];
        for t in &self.trees {
            votes[t.vote(x)] += 1;
        }
        let total = self.trees.len() as f64;
        let label_index = argmax(votes.iter().map(|v| *v as f64));
        Prediction {
            label: self.vocabulary[label_index].clone(),
            label_index,
            vote_shares: votes.iter().map(|v| *v as f64 / total).collect(),
        }
    }

    /// Look up every manifest feature by name.
    pub fn predict_named(&self, features: &[(&str, f64)]) -> Result<Prediction> {
        let x = self
            .feature_names
            .iter()
            .map(|name| {
                features
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, v)| *v)
                    .ok_or_else(|| Error::ManifestMismatch(format!("missing feature `{name}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(self.predict_values(&x))
    }

    pub fn predict(&self, fv: &FeatureVector) -> Result<Prediction> {
        let named: Vec<(&str, f64)> = FEATURE_NAMES
            .iter()
            .copied()
            .zip(fv.values.iter().copied())
            .collect();
        self.predict_named(&named)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        if model.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "model schema version {} (expected {MODEL_SCHEMA_VERSION})",
                model.schema_version
            )));
        }
        Ok(model)
    }
}
