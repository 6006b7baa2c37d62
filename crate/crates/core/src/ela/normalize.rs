use crate::error::{Error, Result};

use super::{FeatureVector, FEATURE_NAMES};

/// Z-scored feature matrix with constant columns removed.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFeatures {
    pub names: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

pub fn normalize_features(rows: &[FeatureVector]) -> Result<NormalizedFeatures> {
    if rows.len() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: rows.len(),
        });
    }
    let n = rows.len() as f64;
    let mut names = Vec::new();
    let mut cols = Vec::new();
    let mut means = Vec::new();
    let mut sds = Vec::new();
    for (j, name) in FEATURE_NAMES.iter().enumerate() {
        let col: Vec<f64> = rows.iter().map(|r| r.values[j]).collect();
        if col.iter().all(|v| *v == col[0]) {
            continue;
        }
        let mean = col.iter().sum::<f64>() / n;
        let sd = (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        if !(sd > 0.0) {
            continue;
        }
        names.push(*name);
        cols.push(col);
        means.push(mean);
        sds.push(sd);
    }
    let rows = (0..rows.len())
        .map(|i| {
            cols.iter()
                .zip(means.iter().zip(&sds))
                .map(|(c, (m, s))| (c[i] - m) / s)
                .collect()
        })
        .collect();
    Ok(NormalizedFeatures {
        names,
        rows,
        means,
        sds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn fv(values: Vec<f64>) -> FeatureVector {
        FeatureVector {
            values,
            degenerate: vec![],
        }
    }

    #[test]
    fn constant_columns_dropped_and_columns_standardised() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut rows: Vec<FeatureVector> = (0..20)
            .map(|_| {
                let mut v: Vec<f64> = (0..31).map(|_| rng.random_range(-100.0..100.0)).collect();
                v[0] = 10.0;
                fv(v)
            })
            .collect();
        rows.push(rows[3].clone());
        let out = normalize_features(&rows).unwrap();
        assert_eq!(out.names.len(), 30);
        assert!(!out.names.contains(&"basic.dim"));
        for j in 0..out.names.len() {
            let col: Vec<f64> = out.rows.iter().map(|r| r[j]).collect();
            let m = col.iter().sum::<f64>() / col.len() as f64;
            let sd = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / col.len() as f64).sqrt();
            assert!(m.abs() < 1e-12);
            assert!((sd - 1.0).abs() < 1e-12);
        }
        assert_eq!(out.rows[3], out.rows[20]);
    }

    #[test]
    fn needs_two_rows() {
        assert!(matches!(
            normalize_features(&[fv(vec![0.0; 31])]),
            Err(Error::TooFewRows { .. })
        ));
    }
}
