//! Straight-line walks through an anchor point, clipped to the search box.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problem::{BoxDomain, ProblemInstance};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    pub anchor: Vec<f64>,
    pub direction: Vec<f64>,
    pub step: f64,
}

impl WalkSpec {
    /// Normalises `direction` to unit length.
    pub fn new(anchor: Vec<f64>, direction: Vec<f64>, step: f64) -> Result<Self> {
        if anchor.len() != direction.len() {
            return Err(Error::DimensionMismatch {
                expected: anchor.len(),
                got: direction.len(),
            });
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::BadStep(step));
        }
        let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateDirection);
        }
        let direction = direction.iter().map(|v| v / norm).collect();
        Ok(Self {
            anchor,
            direction,
            step,
        })
    }

    pub fn point(&self, k: i64) -> Vec<f64> {
        let t = k as f64 * self.step;
        self.anchor
            .iter()
            .zip(&self.direction)
            .map(|(a, v)| a + t * v)
            .collect()
    }

    /// All integer offsets whose point lies inside `domain`.
    pub fn offsets(&self, domain: &BoxDomain) -> Result<std::ops::RangeInclusive<i64>> {
        if self.anchor.len() != domain.dimension() {
            return Err(Error::DimensionMismatch {
                expected: domain.dimension(),
                got: self.anchor.len(),
            });
        }
        if !domain.contains(&self.anchor) {
            return Err(Error::AnchorOutOfBounds);
        }
        let (mut t_lo, mut t_hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..self.anchor.len() {
            let v = self.direction[i];
            if v == 0.0 {
                continue;
            }
            let a = (domain.lower()[i] - self.anchor[i]) / v;
            let b = (domain.upper()[i] - self.anchor[i]) / v;
            t_lo = t_lo.max(a.min(b));
            t_hi = t_hi.min(a.max(b));
        }
        let mut lo = (t_lo / self.step).ceil() as i64;
        let mut hi = (t_hi / self.step).floor() as i64;
        // rounding in the intersection can be off by one either way
        while domain.contains(&self.point(lo - 1)) {
            lo -= 1;
        }
        while !domain.contains(&self.point(lo)) {
            lo += 1;
        }
        while domain.contains(&self.point(hi + 1)) {
            hi += 1;
        }
        while !domain.contains(&self.point(hi)) {
            hi -= 1;
        }
        Ok(lo..=hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub offsets: Vec<i64>,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl WalkTrace {
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// The anchor point (offset 0).
    pub fn anchor(&self) -> &[f64] {
        let i = self.offsets.iter().position(|&k| k == 0).unwrap_or(0);
        &self.points[i]
    }
}

/// `0.02 * diagonal / sqrt(d)`.
pub fn default_step(domain: &BoxDomain) -> f64 {
    0.02 * domain.diagonal_length() / (domain.dimension() as f64).sqrt()
}

pub fn diagonal_walk(instance: &ProblemInstance, spec: &WalkSpec) -> Result<WalkTrace> {
    let range = spec.offsets(instance.domain())?;
    let offsets: Vec<i64> = range.collect();
    let points: Vec<Vec<f64>> = offsets.iter().map(|&k| spec.point(k)).collect();
    let values = points
        .par_iter()
        .map(|x| instance.evaluate(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(WalkTrace {
        offsets,
        points,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirectionMode {
    #[default]
    Random,
    /// Unit axis vectors with random sign; for debugging.
    AxisAligned,
}

/// Anchor and directions drawn from `anchor_seed` only, so every problem
/// sharing a box walks the same lines.
pub fn bundle_specs(
    domain: &BoxDomain,
    anchor_seed: u64,
    n_directions: usize,
    step: f64,
    mode: DirectionMode,
) -> Result<Vec<WalkSpec>> {
    if n_directions == 0 {
        return Err(Error::BadSampleSize {
            n: 0,
            reason: "need at least one direction".into(),
        });
    }
    let d = domain.dimension();
    let mut rng = rng::stream("walk", &[anchor_seed, d as u64]);
    let anchor: Vec<f64> = domain
        .lower()
        .iter()
        .zip(domain.upper())
        .map(|(l, u)| l + rng.random::<f64>() * (u - l))
        .collect();
    (0..n_directions)
        .map(|_| {
            let direction: Vec<f64> = match mode {
                DirectionMode::Random => (0..d).map(|_| rng.sample(StandardNormal)).collect(),
                DirectionMode::AxisAligned => {
                    let mut v = vec![0.0; d];
                    let axis = rng.random_range(0..d);
                    v[axis] = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    v
                }
            };
            WalkSpec::new(anchor.clone(), direction, step)
        })
        .collect()
}

pub fn walk_bundle(
    instance: &ProblemInstance,
    anchor_seed: u64,
    n_directions: usize,
    step: f64,
) -> Result<Vec<WalkTrace>> {
    walk_bundle_with(
        instance,
        anchor_seed,
        n_directions,
        step,
        DirectionMode::Random,
    )
}

pub fn walk_bundle_with(
    instance: &ProblemInstance,
    anchor_seed: u64,
    n_directions: usize,
    step: f64,
    mode: DirectionMode,
) -> Result<Vec<WalkTrace>> {
    bundle_specs(instance.domain(), anchor_seed, n_directions, step, mode)?
        .iter()
        .map(|spec| diagonal_walk(instance, spec))
        .collect()
}
