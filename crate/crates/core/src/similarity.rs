//! Exact t-SNE for embedding normalised feature vectors in the plane.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

const INIT_SD: f64 = 1e-4;
const TRACE_EVERY: usize = 50;
const MIN_GAIN: f64 = 0.01;
const BISECTION_STEPS: usize = 200;
const ENTROPY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub exaggeration: f64,
    pub exaggeration_iters: usize,
    pub momentum_start: f64,
    pub momentum_end: f64,
    pub momentum_switch: usize,
    pub seed: u64,
    pub record_trace: bool,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            exaggeration: 12.0,
            exaggeration_iters: 250,
            momentum_start: 0.5,
            momentum_end: 0.8,
            momentum_switch: 250,
            seed: 1,
            record_trace: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checkpoint {
    pub iteration: usize,
    pub kl: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Vec<[f64; 2]>,
    pub final_kl: f64,
    pub iterations: usize,
    trace: Option<Vec<Checkpoint>>,
}

impl Embedding {
    /// KL divergence every 50 iterations.
    pub fn kl_trace(&self) -> Result<&[Checkpoint]> {
        self.trace.as_deref().ok_or(Error::TraceDisabled)
    }

    pub fn kl_at(&self, iteration: usize) -> Option<f64> {
        self.trace
            .as_ref()?
            .iter()
            .find(|c| c.iteration == iteration)
            .map(|c| c.kl)
    }
}

/// Conditional distribution `p_{j|i}` for one row of squared distances
/// (entry `i` itself is ignored), with the bandwidth chosen by bisection so
/// that its entropy is `log2(perplexity)` bits. Returns the row and its
/// entropy in bits.
pub fn conditional_row(d2: &[f64], i: usize, perplexity: f64) -> (Vec<f64>, f64) {
    // sums run over sorted distances so equal rows give bit-equal results
    let mut sorted: Vec<f64> = d2
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, v)| *v)
        .collect();
    sorted.sort_by(f64::total_cmp);
    let d_min = sorted[0];
    let target = perplexity.log2();
    let mut beta = 1.0;
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    let (mut h, mut sum) = entropy(&sorted, d_min, beta);
    for _ in 0..BISECTION_STEPS {
        if (h - target).abs() < ENTROPY_TOL {
            break;
        }
        if h > target {
            lo = beta;
            beta = if hi.is_finite() {
                (beta + hi) / 2.0
            } else {
                beta * 2.0
            };
        } else {
            hi = beta;
            beta = (beta + lo) / 2.0;
        }
        (h, sum) = entropy(&sorted, d_min, beta);
    }
    let p = d2
        .iter()
        .enumerate()
        .map(|(j, dj)| {
            if j == i {
                0.0
            } else {
                (-(dj - d_min) * beta).exp() / sum
            }
        })
        .collect();
    (p, h)
}

/// Entropy in bits of the Gaussian kernel at precision `beta`, and the
/// kernel's normaliser. Distances are shifted by the nearest one.
fn entropy(sorted: &[f64], d_min: f64, beta: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for d in sorted {
        let shifted = d - d_min;
        let k = (-shifted * beta).exp();
        sum += k;
        weighted += shifted * k;
    }
    let h = sum.ln() + beta * weighted / sum;
    (h / std::f64::consts::LN_2, sum)
}

fn squared_distances(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.par_iter()
        .map(|a| {
            x.iter()
                .map(|b| a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum())
                .collect()
        })
        .collect()
}

/// Symmetrised joint affinities `P`.
pub fn joint_affinities(x: &[Vec<f64>], perplexity: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let d2 = squared_distances(x);
    let cond: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| conditional_row(&d2[i], i, perplexity).0)
        .collect();
    let scale = 2.0 * n as f64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ((cond[i][j] + cond[j][i]) / scale).max(1e-12))
                .collect()
        })
        .collect()
}

fn init_coords(x: &[Vec<f64>], seed: u64) -> Vec<[f64; 2]> {
    let normal = Normal::new(0.0, INIT_SD).expect("valid sd");
    x.iter()
        .map(|row| {
            let mut r = ChaCha8Rng::from_seed(rng::hash_row("tsne-init", seed, row));
            [normal.sample(&mut r), normal.sample(&mut r)]
        })
        .collect()
}

fn kl(p: &[Vec<f64>], y: &[[f64; 2]]) -> f64 {
    let n = y.len();
    let mut num = vec![vec![0.0; n]; n];
    let mut z = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let dx = y[i][0] - y[j][0];
                let dy = y[i][1] - y[j][1];
                num[i][j] = 1.0 / (1.0 + dx * dx + dy * dy);
                z += num[i][j];
            }
        }
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let q = (num[i][j] / z).max(1e-12);
                total += p[i][j] * (p[i][j] / q).ln();
            }
        }
    }
    total.max(0.0)
}

/// Embed `x` (rows of a normalised feature matrix) in two dimensions.
pub fn tsne_embed(x: &[Vec<f64>], config: &TsneConfig) -> Result<Embedding> {
    let n = x.len();
    if n < 4 {
        return Err(Error::TooFewRows { needed: 4, got: n });
    }
    if !(config.perplexity > 0.0) || config.perplexity >= (n as f64 - 1.0) / 3.0 {
        return Err(Error::PerplexityTooLarge {
            perplexity: config.perplexity,
            rows: n,
        });
    }
    if x.iter().all(|r| r == &x[0]) {
        return Err(Error::DegenerateInput("all rows are identical".into()));
    }
    // optimise in a content-determined row order so the result does not
    // depend on how the caller ordered the rows
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        x[a].iter()
            .zip(&x[b])
            .map(|(u, v)| u.total_cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let canonical: Vec<Vec<f64>> = order.iter().map(|&i| x[i].clone()).collect();
    let x = &canonical;
    let p = joint_affinities(x, config.perplexity);
    let mut y = init_coords(x, config.seed);
    let mut update = vec![[0.0; 2]; n];
    let mut gains = vec![[1.0f64; 2]; n];
    let mut trace = config.record_trace.then(Vec::new);
    let mut num = vec![0.0; n * n];

    for iter in 1..=config.iterations {
        let exaggeration = if iter <= config.exaggeration_iters {
            config.exaggeration
        } else {
            1.0
        };
        let momentum = if iter <= config.momentum_switch {
            config.momentum_start
        } else {
            config.momentum_end
        };
        let mut z = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = if i == j {
                    0.0
                } else {
                    let dx = y[i][0] - y[j][0];
                    let dy = y[i][1] - y[j][1];
                    1.0 / (1.0 + dx * dx + dy * dy)
                };
                num[i * n + j] = v;
                z += v;
            }
        }
        let grad: Vec<[f64; 2]> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut g = [0.0; 2];
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let w = num[i * n + j];
                    let m = (exaggeration * p[i][j] - w / z) * w;
                    g[0] += 4.0 * m * (y[i][0] - y[j][0]);
                    g[1] += 4.0 * m * (y[i][1] - y[j][1]);
                }
                g
            })
            .collect();
        for i in 0..n {
            for k in 0..2 {
                gains[i][k] = if (grad[i][k] > 0.0) != (update[i][k] > 0.0) {
                    gains[i][k] + 0.2
                } else {
                    (gains[i][k] * 0.8).max(MIN_GAIN)
                };
                update[i][k] =
                    momentum * update[i][k] - config.learning_rate * gains[i][k] * grad[i][k];
                y[i][k] += update[i][k];
            }
        }
        for k in 0..2 {
            let mean = y.iter().map(|c| c[k]).sum::<f64>() / n as f64;
            for c in y.iter_mut() {
                c[k] -= mean;
            }
        }
        if let Some(t) = trace.as_mut() {
            if iter % TRACE_EVERY == 0 {
                t.push(Checkpoint {
                    iteration: iter,
                    kl: kl(&p, &y),
                });
            }
        }
    }
    let final_kl = kl(&p, &y);
    let mut coords = vec![[0.0; 2]; n];
    for (k, &i) in order.iter().enumerate() {
        coords[i] = y[k];
    }
    Ok(Embedding {
        final_kl,
        coords,
        iterations: config.iterations,
        trace,
    })
}

/// Mean embedded distance within groups and between groups.
pub fn cohesion(coords: &[[f64; 2]], groups: &[&str]) -> (f64, f64) {
    let (mut intra, mut n_intra, mut inter, mut n_inter) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let d = ((coords[i][0] - coords[j][0]).powi(2) + (coords[i][1] - coords[j][1]).powi(2))
                .sqrt();
            if groups[i] == groups[j] {
                intra += d;
                n_intra += 1;
            } else {
                inter += d;
                n_inter += 1;
            }
        }
    }
    (intra / n_intra as f64, inter / n_inter as f64)
}
