use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub problem: String,
    pub instance: u64,
    pub design: String,
    pub sample_seed: u64,
}

/// Evaluated design points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl SampleSet {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = x[0].len();
        if d == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(row) = x.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: row.len(),
            });
        }
        if x.iter().flatten().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Parse("sample contains non-finite values".into()));
        }
        Ok(Self {
            x,
            y,
            provenance: None,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn d(&self) -> usize {
        self.x[0].len()
    }
}

/// Latin hypercube in the unit cube: each column is a random permutation of
/// the strata with a uniform offset inside each stratum.
pub fn lhs_design(n: usize, d: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return Err(Error::BadSampleSize {
            n,
            reason: "a design needs at least 2 points".into(),
        });
    }
    if d == 0 {
        return Err(Error::BadSampleSize {
            n,
            reason: "dimension must be positive".into(),
        });
    }
    let mut rng = rng::stream("lhs", &[seed, n as u64, d as u64]);
    let mut x = vec![vec![0.0; d]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    #[allow(clippy::needless_range_loop)]
    for j in 0..d {
        perm.shuffle(&mut rng);
        for (i, &stratum) in perm.iter().enumerate() {
            // keep clear of stratum edges so rescaling cannot change the bin
            let u = 1e-9 + (1.0 - 2e-9) * rng.random::<f64>();
            x[i][j] = (stratum as f64 + u) / n as f64;
        }
    }
    Ok(x)
}

pub fn lhs_sample(instance: &ProblemInstance, n: usize, sample_seed: u64) -> Result<SampleSet> {
    let domain = instance.domain();
    let unit = lhs_design(n, domain.dimension(), sample_seed)?;
    let x: Vec<Vec<f64>> = unit
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, t)| {
                    let (lo, hi) = (domain.lower()[j], domain.upper()[j]);
                    (lo + t * (hi - lo)).clamp(lo, hi)
                })
                .collect()
        })
        .collect();
    let y = x
        .par_iter()
        .map(|p| instance.evaluate(p))
        .collect::<Result<Vec<_>>>()?;
    let mut s = SampleSet::new(x, y)?;
    s.provenance = Some(Provenance {
        problem: instance.id().to_string(),
        instance: instance.instance_seed(),
        design: "lhs".into(),
        sample_seed,
    });
    Ok(s)
}
