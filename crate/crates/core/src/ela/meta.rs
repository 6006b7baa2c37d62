use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::SampleSet;

/// Least-squares fit summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    /// Intercept first, then the model terms in order.
    pub coefficients: Vec<f64>,
    pub r2: f64,
    /// `y` had zero variance; `r2` is reported as 1.
    pub constant_response: bool,
}

fn fit(columns: usize, n: usize, term: impl Fn(usize, usize) -> f64, y: &[f64]) -> Result<Fit> {
    if n <= columns {
        return Err(Error::TooFewRows {
            needed: columns + 1,
            got: n,
        });
    }
    let a = DMatrix::from_fn(n, columns, term);
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let tol = s_max * (n.max(columns) as f64) * f64::EPSILON;
    if !(s_max > 0.0) || svd.singular_values.iter().any(|s| *s <= tol) {
        return Err(Error::RankDeficient);
    }
    let beta = svd.solve(&b, tol).map_err(|_| Error::RankDeficient)?;
    let mean = y.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    if ss_tot == 0.0 {
        return Ok(Fit {
            coefficients: beta.iter().copied().collect(),
            r2: 1.0,
            constant_response: true,
        });
    }
    let resid = &a * &beta - &b;
    let ss_res = resid.norm_squared();
    Ok(Fit {
        coefficients: beta.iter().copied().collect(),
        r2: (1.0 - ss_res / ss_tot).clamp(0.0, 1.0),
        constant_response: false,
    })
}

/// `y ~ b0 + sum b_i x_i`.
pub fn linear_fit(sample: &SampleSet) -> Result<Fit> {
    let d = sample.d();
    fit(
        1 + d,
        sample.n(),
        |i, j| if j == 0 { 1.0 } else { sample.x[i][j - 1] },
        &sample.y,
    )
}

/// `y ~ b0 + sum b_i x_i + sum g_i x_i^2` (no interaction terms).
pub fn quadratic_fit(sample: &SampleSet) -> Result<Fit> {
    let d = sample.d();
    fit(
        1 + 2 * d,
        sample.n(),
        |i, j| match j {
            0 => 1.0,
            j if j <= d => sample.x[i][j - 1],
            j => sample.x[i][j - 1 - d].powi(2),
        },
        &sample.y,
    )
}

/// Quality of the pure-quadratic model.
pub fn meta_model_r2(sample: &SampleSet) -> Result<Fit> {
    quadratic_fit(sample)
}
