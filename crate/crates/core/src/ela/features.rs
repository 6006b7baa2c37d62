//! The 31-feature manifest.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::rng;

use super::{distance, linear_fit, nearest_better, quadratic_fit, SampleSet};
use rand::Rng;

pub const FEATURE_NAMES: [&str; 31] = [
    "basic.dim",
    "basic.n",
    "basic.y_min",
    "basic.y_max",
    "basic.y_mean",
    "basic.y_sd",
    "ydist.skewness",
    "ydist.kurtosis",
    "ydist.entropy",
    "meta.lin_r2",
    "meta.quad_r2",
    "meta.lin_coef_min",
    "meta.lin_coef_max",
    "meta.quad_coef_ratio",
    "disp.ratio_02",
    "disp.ratio_05",
    "disp.ratio_10",
    "disp.ratio_25",
    "levelset.mmce_10",
    "levelset.mmce_25",
    "levelset.mmce_50",
    "nbc.nn_nb_ratio",
    "nbc.nb_nn_sd_ratio",
    "nbc.nn_y_cor",
    "ic.h_max",
    "ic.eps_h_max",
    "ic.m0",
    "ic.eps_settle",
    "pca.x_cov_90",
    "pca.xy_cor_90",
    "pca.pc1_share",
];

const HIST_BINS: usize = 20;
const DISPERSION_QUANTILES: [f64; 4] = [0.02, 0.05, 0.10, 0.25];
const LEVELSET_QUANTILES: [f64; 3] = [0.10, 0.25, 0.50];
/// log10 of the IC thresholds; `None` stands for epsilon = 0.
const IC_LOG_EPS: [Option<i32>; 9] = [
    None,
    Some(-5),
    Some(-4),
    Some(-3),
    Some(-2),
    Some(-1),
    Some(0),
    Some(1),
    Some(2),
];
const IC_ZERO_LOG: f64 = -6.0;
const IC_UNSETTLED_LOG: f64 = 3.0;
const IC_SETTLE_H: f64 = 0.05;

/// Feature values in manifest order, with the names of any features that
/// fell back to a sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub degenerate: Vec<&'static str>,
}

impl FeatureVector {
    pub fn names(&self) -> &'static [&'static str] {
        &FEATURE_NAMES
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }

    pub fn as_map(&self) -> BTreeMap<&'static str, f64> {
        FEATURE_NAMES
            .iter()
            .copied()
            .zip(self.values.iter().copied())
            .collect()
    }
}

/// Serialises as an ordered `{name: value}` object.
impl Serialize for FeatureVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(FEATURE_NAMES.len()))?;
        for (k, v) in FEATURE_NAMES.iter().zip(&self.values) {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

struct Builder {
    values: Vec<f64>,
    degenerate: Vec<&'static str>,
}

impl Builder {
    fn push(&mut self, v: f64) {
        self.values.push(v);
    }

    fn push_or(&mut self, v: Option<f64>, fallback: f64) {
        match v {
            Some(v) if v.is_finite() => self.values.push(v),
            _ => {
                self.degenerate.push(FEATURE_NAMES[self.values.len()]);
                self.values.push(fallback);
            }
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn pop_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64).sqrt()
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    (saa > 0.0 && sbb > 0.0).then(|| sab / (saa * sbb).sqrt())
}

fn histogram_entropy(y: &[f64]) -> f64 {
    let (lo, hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(*v), b.max(*v))
        });
    if !(hi > lo) {
        return 0.0;
    }
    let mut counts = [0usize; HIST_BINS];
    for v in y {
        let k = (((v - lo) / (hi - lo)) * HIST_BINS as f64) as usize;
        counts[k.min(HIST_BINS - 1)] += 1;
    }
    let n = y.len() as f64;
    counts
        .iter()
        .filter(|c| **c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Indices sorted by fitness, ties by index.
fn ranked(y: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]).then(a.cmp(&b)));
    order
}

fn mean_pairwise(x: &[Vec<f64>], idx: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            total += distance(&x[i], &x[j]);
            count += 1;
        }
    }
    total / count as f64
}

/// Resubstitution error of a two-class nearest-centroid rule.
fn nearest_centroid_error(x: &[Vec<f64>], labels: &[bool]) -> Option<f64> {
    let d = x[0].len();
    let mut c = [vec![0.0; d], vec![0.0; d]];
    let mut counts = [0usize; 2];
    for (row, &l) in x.iter().zip(labels) {
        let k = l as usize;
        counts[k] += 1;
        for (acc, v) in c[k].iter_mut().zip(row) {
            *acc += v;
        }
    }
    if counts.contains(&0) {
        return None;
    }
    for k in 0..2 {
        for v in c[k].iter_mut() {
            *v /= counts[k] as f64;
        }
    }
    let wrong = x
        .iter()
        .zip(labels)
        .filter(|(row, &l)| {
            let predicted = distance(row, &c[1]) < distance(row, &c[0]);
            predicted != l
        })
        .count();
    Some(wrong as f64 / x.len() as f64)
}

/// Greedy nearest-neighbour tour starting from a seeded point.
fn nn_tour(x: &[Vec<f64>], start: usize) -> Vec<usize> {
    let n = x.len();
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    tour.push(cur);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for j in 0..n {
            if !visited[j] {
                let dist = distance(&x[cur], &x[j]);
                if dist < best_d {
                    best_d = dist;
                    best = j;
                }
            }
        }
        visited[best] = true;
        tour.push(best);
        cur = best;
    }
    tour
}

fn symbols(slopes: &[f64], eps: f64) -> Vec<i8> {
    slopes
        .iter()
        .map(|s| {
            if *s > eps {
                1
            } else if *s < -eps {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Entropy over the six ordered pairs of unequal consecutive symbols.
fn pair_entropy(sym: &[i8]) -> f64 {
    if sym.len() < 2 {
        return 0.0;
    }
    let mut counts = [[0usize; 3]; 3];
    for w in sym.windows(2) {
        counts[(w[0] + 1) as usize][(w[1] + 1) as usize] += 1;
    }
    let total = (sym.len() - 1) as f64;
    let mut h = 0.0;
    for (a, row) in counts.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if a != b && c > 0 {
                let p = c as f64 / total;
                h -= p * p.log(6.0);
            }
        }
    }
    h
}

/// Share of changes of direction in the sequence with zeros removed and
/// runs collapsed.
fn partial_information(sym: &[i8]) -> f64 {
    if sym.is_empty() {
        return 0.0;
    }
    let mut collapsed: Vec<i8> = Vec::new();
    for &s in sym.iter().filter(|s| **s != 0) {
        if collapsed.last() != Some(&s) {
            collapsed.push(s);
        }
    }
    collapsed.len().saturating_sub(1) as f64 / sym.len() as f64
}

/// Number of leading eigenvalues needed to reach 90% of the trace, divided
/// by the matrix size; also the first eigenvalue's share.
fn pca_summary(m: DMatrix<f64>) -> (f64, f64) {
    let size = m.nrows();
    let mut eig: Vec<f64> = SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .map(|v| v.max(0.0))
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = eig.iter().sum();
    if !(total > 0.0) {
        return (1.0, 1.0 / size as f64);
    }
    let mut acc = 0.0;
    let mut k = size;
    for (i, v) in eig.iter().enumerate() {
        acc += v;
        if acc >= 0.9 * total {
            k = i + 1;
            break;
        }
    }
    (k as f64 / size as f64, eig[0] / total)
}

fn covariance(cols: &[Vec<f64>]) -> DMatrix<f64> {
    let p = cols.len();
    let n = cols[0].len() as f64;
    let means: Vec<f64> = cols.iter().map(|c| mean(c)).collect();
    DMatrix::from_fn(p, p, |a, b| {
        cols[a]
            .iter()
            .zip(&cols[b])
            .map(|(u, v)| (u - means[a]) * (v - means[b]))
            .sum::<f64>()
            / n
    })
}

/// Correlation matrix; zero-variance columns get unit diagonal and zero
/// off-diagonal entries.
fn correlation(cols: &[Vec<f64>]) -> (DMatrix<f64>, bool) {
    let cov = covariance(cols);
    let p = cols.len();
    let sd: Vec<f64> = (0..p).map(|i| cov[(i, i)].sqrt()).collect();
    let degenerate = sd.iter().any(|s| !(*s > 0.0));
    let m = DMatrix::from_fn(p, p, |a, b| {
        if a == b {
            1.0
        } else if sd[a] > 0.0 && sd[b] > 0.0 {
            cov[(a, b)] / (sd[a] * sd[b])
        } else {
            0.0
        }
    });
    (m, degenerate)
}

/// All 31 features of one sample. `feature_seed` picks the start of the
/// information-content tour.
pub fn compute_features(sample: &SampleSet, feature_seed: u64) -> Result<FeatureVector> {
    let n = sample.n();
    let d = sample.d();
    if n < 2 * d + 2 {
        return Err(Error::TooFewRows {
            needed: 2 * d + 2,
            got: n,
        });
    }
    let x = &sample.x;
    let y = &sample.y;
    let mut b = Builder {
        values: Vec::with_capacity(FEATURE_NAMES.len()),
        degenerate: Vec::new(),
    };

    // basic
    let y_mean = mean(y);
    let y_sd = pop_sd(y);
    b.push(d as f64);
    b.push(n as f64);
    b.push(y.iter().copied().fold(f64::INFINITY, f64::min));
    b.push(y.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    b.push(y_mean);
    b.push(y_sd);

    // y-distribution
    let m2 = y_sd * y_sd;
    let m3 = y.iter().map(|v| (v - y_mean).powi(3)).sum::<f64>() / n as f64;
    let m4 = y.iter().map(|v| (v - y_mean).powi(4)).sum::<f64>() / n as f64;
    let spread = m2 > 0.0;
    b.push_or(spread.then(|| m3 / m2.powf(1.5)), 0.0);
    b.push_or(spread.then(|| m4 / (m2 * m2) - 3.0), 0.0);
    b.push(histogram_entropy(y));

    // meta-model
    let lin = linear_fit(sample)?;
    let quad = quadratic_fit(sample)?;
    b.push_or((!lin.constant_response).then_some(lin.r2), 1.0);
    b.push_or((!quad.constant_response).then_some(quad.r2), 1.0);
    let lin_abs: Vec<f64> = lin.coefficients[1..].iter().map(|v| v.abs()).collect();
    b.push(lin_abs.iter().copied().fold(f64::INFINITY, f64::min));
    b.push(lin_abs.iter().copied().fold(0.0, f64::max));
    let quad_abs: Vec<f64> = quad.coefficients[1 + d..].iter().map(|v| v.abs()).collect();
    let q_min = quad_abs.iter().copied().fold(f64::INFINITY, f64::min);
    let q_max = quad_abs.iter().copied().fold(0.0, f64::max);
    b.push_or((q_min > 0.0).then(|| q_max / q_min), 1.0);

    // dispersion
    let order = ranked(y);
    let all: Vec<usize> = (0..n).collect();
    let overall = mean_pairwise(x, &all);
    for q in DISPERSION_QUANTILES {
        let k = ((q * n as f64).ceil() as usize).max(2).min(n);
        let best = mean_pairwise(x, &order[..k]);
        b.push_or((overall > 0.0).then(|| best / overall), 1.0);
    }

    // level set
    for q in LEVELSET_QUANTILES {
        let k = ((q * n as f64).ceil() as usize).clamp(1, n);
        let threshold = y[order[k - 1]];
        let labels: Vec<bool> = y.iter().map(|v| *v <= threshold).collect();
        b.push_or(nearest_centroid_error(x, &labels), 0.0);
    }

    // nearest better
    match nearest_better(sample) {
        Ok(nb) => {
            b.push(nb.ratio());
            let nb_d: Vec<f64> = nb.nb.iter().flatten().copied().collect();
            let sd_nn = pop_sd(&nb.nn);
            b.push_or((sd_nn > 0.0).then(|| pop_sd(&nb_d) / sd_nn), 1.0);
            b.push_or(pearson(&nb.nn, y), 0.0);
        }
        Err(Error::AllEqualFitness) => {
            b.push_or(None, 1.0);
            b.push_or(None, 1.0);
            b.push_or(None, 0.0);
        }
        Err(e) => return Err(e),
    }

    // information content
    let start = rng::stream("ic-tour", &[feature_seed]).random_range(0..n);
    let tour = nn_tour(x, start);
    let slopes: Vec<f64> = tour
        .windows(2)
        .map(|w| {
            let dist = distance(&x[w[0]], &x[w[1]]);
            if dist > 0.0 {
                (y[w[1]] - y[w[0]]) / dist
            } else {
                0.0
            }
        })
        .collect();
    let mut h_max = f64::NEG_INFINITY;
    let mut eps_h_max = IC_ZERO_LOG;
    let mut settle = None;
    let mut m0 = 0.0;
    for log_eps in IC_LOG_EPS {
        let eps = log_eps.map_or(0.0, |k| 10f64.powi(k));
        let tag = log_eps.map_or(IC_ZERO_LOG, f64::from);
        let sym = symbols(&slopes, eps);
        let h = pair_entropy(&sym);
        if h > h_max {
            h_max = h;
            eps_h_max = tag;
        }
        if log_eps.is_none() {
            m0 = partial_information(&sym);
        }
        if settle.is_none() && h < IC_SETTLE_H {
            settle = Some(tag);
        }
    }
    b.push(h_max);
    b.push(eps_h_max);
    b.push(m0);
    b.push_or(settle, IC_UNSETTLED_LOG);

    // pca
    let mut cols: Vec<Vec<f64>> = (0..d).map(|j| x.iter().map(|r| r[j]).collect()).collect();
    let (x_frac, pc1) = pca_summary(covariance(&cols));
    cols.push(y.clone());
    let (cor, cor_degenerate) = correlation(&cols);
    let (xy_frac, _) = pca_summary(cor);
    b.push(x_frac);
    b.push_or((!cor_degenerate).then_some(xy_frac), xy_frac);
    b.push(pc1);

    debug_assert_eq!(b.values.len(), FEATURE_NAMES.len());
    Ok(FeatureVector {
        values: b.values,
        degenerate: b.degenerate,
    })
}
