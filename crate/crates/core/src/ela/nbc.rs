use crate::error::{Error, Result};

use super::{distance, SampleSet};

/// Nearest-neighbour and nearest-better distances per point.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestBetter {
    pub nn: Vec<f64>,
    /// `None` for points with no strictly better point.
    pub nb: Vec<Option<f64>>,
}

impl NearestBetter {
    pub fn ratio(&self) -> f64 {
        let nn = self.nn.iter().sum::<f64>() / self.nn.len() as f64;
        let nb: Vec<f64> = self.nb.iter().flatten().copied().collect();
        nn / (nb.iter().sum::<f64>() / nb.len() as f64)
    }
}

pub fn nearest_better(sample: &SampleSet) -> Result<NearestBetter> {
    let n = sample.n();
    if n < 3 {
        return Err(Error::TooFewRows { needed: 3, got: n });
    }
    if sample.y.iter().all(|v| *v == sample.y[0]) {
        return Err(Error::AllEqualFitness);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sample.y[a].total_cmp(&sample.y[b]).then(a.cmp(&b)));

    let mut nn = vec![f64::INFINITY; n];
    let mut nb = vec![None; n];
    // walk points best-first; strictly better candidates are a prefix of `order`
    let mut better_end = 0;
    for &i in &order {
        while sample.y[order[better_end]] < sample.y[i] {
            better_end += 1;
        }
        let mut best_nb = f64::INFINITY;
        for (pos, &j) in order.iter().enumerate() {
            if j == i {
                continue;
            }
            let dist = distance(&sample.x[i], &sample.x[j]);
            if dist < nn[i] {
                nn[i] = dist;
            }
            if pos < better_end && dist < best_nb {
                best_nb = dist;
            }
        }
        if better_end > 0 {
            nb[i] = Some(best_nb);
        }
    }
    Ok(NearestBetter { nn, nb })
}

/// Mean nearest-neighbour distance over mean nearest-better distance.
pub fn nearest_better_ratio(sample: &SampleSet) -> Result<f64> {
    Ok(nearest_better(sample)?.ratio())
}
