//! Feature records and the standard problem collections built from them.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ela::{compute_features, lhs_sample, FeatureVector, FEATURE_NAMES};
use crate::error::{Error, Result};
use crate::mario::INSTANCE_SEEDS;
use crate::problem::{resolve, ProblemId};
use crate::properties::{LabelTable, LabelledRow, Property};

/// Default sample size per dimension.
pub const SAMPLES_PER_DIM: usize = 50;
/// Instances per Shekel peak count and per labelled baseline function.
pub const LABELLED_INSTANCES: u64 = 5;
/// Instances per classic function in the embedding corpus.
pub const EMBED_BASELINE_INSTANCES: u64 = 15;

/// Features of one sampled problem instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureRecord {
    pub problem: String,
    pub instance: u64,
    pub n: usize,
    pub d: usize,
    pub sample_seed: u64,
    pub features: FeatureVector,
    pub degenerate: Vec<String>,
}

impl FeatureRecord {
    pub fn id(&self) -> Result<ProblemId> {
        self.problem.parse()
    }

    pub fn to_json(&self, meta: Value) -> Value {
        let mut v = serde_json::to_value(self).expect("record serialises");
        if let Value::Object(m) = &mut v {
            m.insert("meta".into(), meta);
        }
        v
    }

    /// Parse a record; every manifest feature must be present.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("feature record: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
        let str_field = |k: &str| obj.get(k).and_then(Value::as_str).ok_or_else(|| bad(k));
        let int_field = |k: &str| obj.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
        let features: &Map<String, Value> = obj
            .get("features")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("features"))?;
        let values = FEATURE_NAMES
            .iter()
            .map(|name| {
                features
                    .get(*name)
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::ManifestMismatch(format!("missing feature `{name}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if features.len() != FEATURE_NAMES.len() {
            return Err(Error::ManifestMismatch(format!(
                "{} features, manifest has {}",
                features.len(),
                FEATURE_NAMES.len()
            )));
        }
        let degenerate_names: Vec<String> = obj
            .get("degenerate")
            .and_then(Value::as_array)
            .map(|a| {
                a.iter()
                    .filter_map(|s| s.as_str().map(String::from))
                    .collect()
            })
            .unwrap_or_default();
        let degenerate = FEATURE_NAMES
            .iter()
            .copied()
            .filter(|n| degenerate_names.iter().any(|d| d == n))
            .collect();
        Ok(Self {
            problem: str_field("problem")?.to_string(),
            instance: int_field("instance")?,
            n: int_field("n")? as usize,
            d: int_field("d")? as usize,
            sample_seed: int_field("sample_seed")?,
            features: FeatureVector { values, degenerate },
            degenerate: degenerate_names,
        })
    }
}

/// Sample `(id, seed)` at `n` LHS points in dimension `d` and compute its
/// features.
pub fn feature_record(
    id: ProblemId,
    instance: u64,
    d: usize,
    n: usize,
    sample_seed: u64,
    feature_seed: u64,
) -> Result<FeatureRecord> {
    let inst = resolve(id, instance, d)?;
    let sample = lhs_sample(&inst, n, sample_seed)?;
    let features = compute_features(&sample, feature_seed)?;
    Ok(FeatureRecord {
        problem: id.to_string(),
        instance,
        n,
        d,
        sample_seed,
        degenerate: features.degenerate.iter().map(|s| s.to_string()).collect(),
        features,
    })
}

/// Feature records for many instances, computed in parallel, returned in
/// input order.
pub fn feature_records(
    jobs: &[(ProblemId, u64)],
    d: usize,
    n: usize,
    sample_seed: u64,
    feature_seed: u64,
) -> Result<Vec<FeatureRecord>> {
    jobs.par_iter()
        .map(|(id, seed)| feature_record(*id, *seed, d, n, sample_seed, feature_seed))
        .collect()
}

/// The 28 x 7 level-generation instances.
pub fn mario_jobs() -> Vec<(ProblemId, u64)> {
    ProblemId::all_mario()
        .into_iter()
        .flat_map(|id| INSTANCE_SEEDS.map(move |s| (id, s)))
        .collect()
}

/// Every labelled function (classics and Shekel) with 5 instances each.
pub fn labelled_jobs() -> Vec<(ProblemId, u64)> {
    ProblemId::all_functions()
        .into_iter()
        .chain(ProblemId::all_shekel())
        .flat_map(|id| (1..=LABELLED_INSTANCES).map(move |s| (id, s)))
        .collect()
}

/// Rows of the embedding corpus beyond the mario ones: 8 Shekel variants x 5
/// and 8 classic functions x 15.
pub fn embedding_baseline_jobs() -> Vec<(ProblemId, u64)> {
    let shekel = ProblemId::all_shekel()
        .into_iter()
        .flat_map(|id| (1..=LABELLED_INSTANCES).map(move |s| (id, s)));
    let classic = ProblemId::all_functions()
        .into_iter()
        .flat_map(|id| (1..=EMBED_BASELINE_INSTANCES).map(move |s| (id, s)));
    shekel.chain(classic).collect()
}

/// Attach labels for `property` to every record whose function is in the
/// table; other records are skipped.
pub fn labelled_rows(
    records: &[FeatureRecord],
    table: &LabelTable,
    property: Property,
) -> Result<Vec<LabelledRow>> {
    records
        .iter()
        .filter_map(|r| {
            table.label(&r.problem, property).map(|label| {
                Ok(LabelledRow {
                    function: r.problem.clone(),
                    instance: r.instance,
                    features: r.features.values.clone(),
                    label: property.label_index(label)?,
                })
            })
        })
        .collect()
}

/// Standard metadata block attached to JSON outputs.
pub fn meta(extra: &[(&str, Value)]) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!("landscape-atlas"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    for (k, v) in extra {
        m.insert((*k).into(), v.clone());
    }
    Value::Object(m)
}
