//! High-level landscape properties predicted from feature vectors.

mod cv;
mod forest;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use cv::{lofo_cv, majority_lofo, CvReport, Fold};
pub use forest::{train, Prediction, PropertyModel, Tree, DEFAULT_TREES, MODEL_SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Multimodality,
    GlobalStructure,
    Separability,
    VariableScaling,
    Homogeneity,
    BasinSize,
    Contrast,
    Funnel,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Multimodality,
        Property::GlobalStructure,
        Property::Separability,
        Property::VariableScaling,
        Property::Homogeneity,
        Property::BasinSize,
        Property::Contrast,
        Property::Funnel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Multimodality => "multimodality",
            Property::GlobalStructure => "global_structure",
            Property::Separability => "separability",
            Property::VariableScaling => "variable_scaling",
            Property::Homogeneity => "homogeneity",
            Property::BasinSize => "basin_size",
            Property::Contrast => "contrast",
            Property::Funnel => "funnel",
        }
    }

    /// Labels in vocabulary order (used for tie-breaking).
    pub fn vocabulary(self) -> &'static [&'static str] {
        match self {
            Property::Multimodality
            | Property::VariableScaling
            | Property::BasinSize
            | Property::Contrast => &["none", "low", "medium", "high"],
            Property::GlobalStructure => &["none", "weak", "strong"],
            Property::Separability => &["none", "partial", "full"],
            Property::Homogeneity => &["low", "medium", "high"],
            Property::Funnel => &["yes", "no"],
        }
    }

    pub fn label_index(self, label: &str) -> Result<usize> {
        self.vocabulary()
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| Error::UnknownLabel {
                property: self.name().into(),
                label: label.into(),
            })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownProperty(s.into()))
    }
}

/// Per-function property labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelTable {
    rows: Vec<(String, [usize; 8])>,
}

const BUILTIN_LABELS: &str = include_str!("../../data/labels.csv");

impl LabelTable {
    /// Labels for the baseline suite shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_LABELS).expect("shipped labels are valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let mut columns = [0usize; 8];
        for (k, p) in Property::ALL.iter().enumerate() {
            columns[k] = headers
                .iter()
                .position(|h| h == p.name())
                .ok_or_else(|| Error::Parse(format!("labels file lacks column `{}`", p.name())))?;
        }
        let function_col = headers
            .iter()
            .position(|h| h == "function")
            .ok_or_else(|| Error::Parse("labels file lacks column `function`".into()))?;
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let mut labels = [0usize; 8];
            for (k, p) in Property::ALL.iter().enumerate() {
                labels[k] = p.label_index(&record[columns[k]])?;
            }
            rows.push((record[function_col].to_string(), labels));
        }
        Ok(Self { rows })
    }

    pub fn functions(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|(f, _)| f.as_str())
    }

    pub fn label(&self, function: &str, property: Property) -> Option<&'static str> {
        let k = Property::ALL.iter().position(|p| *p == property)?;
        self.rows
            .iter()
            .find(|(f, _)| f == function)
            .map(|(_, l)| property.vocabulary()[l[k]])
    }
}

/// One training row: features of one instance of one source function.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelledRow {
    pub function: String,
    pub instance: u64,
    pub features: Vec<f64>,
    pub label: usize,
}
