//! Fixed-weight latent-to-level decoder.
//!
//! A two-layer tanh network maps a latent vector in `[-1,1]^d` to one score
//! per (tile, row, column); every cell takes the tile with the highest score.
//! Weights are drawn from a seeded stream per (training set, seed, d), so each
//! seed plays the role of one independently trained generator.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

use super::grid::{TileGrid, LEVEL_HEIGHT, SEGMENT_WIDTH};
use super::tile::{Tile, TILE_COUNT};

pub const HIDDEN_WIDTH: usize = 64;

const CELLS: usize = SEGMENT_WIDTH * LEVEL_HEIGHT;
const OUTPUTS: usize = TILE_COUNT * CELLS;

/// Extra Ground score on the rows that carry the floor (and ceiling).
const GROUND_OFFSET: f64 = 0.5;

/// Per-tile prior added to every cell's score, by row band (sky, low rows,
/// floor rows). Keeps decoded levels mostly open like real platformer levels.
const TILE_PRIOR: [[f64; TILE_COUNT]; 3] = [
    // Air, Ground, Destr, QPow, QCoin, Coin, TTL, TTR, TBody, BBC, Piranha, Platf, Enemy
    [
        0.35, -0.25, -0.1, -0.2, -0.15, -0.1, -0.3, -0.3, -0.3, -0.3, -0.3, -0.15, -0.25,
    ],
    [
        0.3, -0.15, -0.1, -0.2, -0.15, -0.1, -0.15, -0.15, -0.15, -0.2, -0.2, -0.1, -0.1,
    ],
    [
        0.55, 0.15, -0.1, -0.2, -0.2, -0.2, -0.1, -0.1, -0.1, -0.15, -0.2, -0.1, -0.1,
    ],
];

fn prior_band(y: usize) -> usize {
    match y {
        0..=9 => 0,
        10..=11 => 1,
        _ => 2,
    }
}

/// Which family of levels a decoder imitates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrainingSet {
    Overworld,
    Underground,
}

impl TrainingSet {
    pub fn tag(self) -> u64 {
        match self {
            TrainingSet::Overworld => 0,
            TrainingSet::Underground => 1,
        }
    }

    fn ground_rows(self) -> &'static [usize] {
        match self {
            TrainingSet::Overworld => &[LEVEL_HEIGHT - 2, LEVEL_HEIGHT - 1],
            TrainingSet::Underground => &[0, 1, LEVEL_HEIGHT - 2, LEVEL_HEIGHT - 1],
        }
    }
}

impl fmt::Display for TrainingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrainingSet::Overworld => "overworld",
            TrainingSet::Underground => "underground",
        })
    }
}

/// Immutable decoder weights.
#[derive(Clone)]
pub struct DecoderParams {
    training: TrainingSet,
    seed: u64,
    input_dim: usize,
    // HIDDEN_WIDTH x input_dim
    w1: Vec<f64>,
    b1: Vec<f64>,
    // (tile, row, column) x HIDDEN_WIDTH
    w2: Vec<f64>,
    // output bias with the tile prior and ground offsets folded in
    b2: Vec<f64>,
}

impl fmt::Debug for DecoderParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecoderParams")
            .field("training", &self.training)
            .field("seed", &self.seed)
            .field("input_dim", &self.input_dim)
            .finish_non_exhaustive()
    }
}

impl PartialEq for DecoderParams {
    fn eq(&self, other: &Self) -> bool {
        self.training == other.training
            && self.seed == other.seed
            && self.input_dim == other.input_dim
    }
}

#[inline]
fn out_index(tile: usize, y: usize, x: usize) -> usize {
    (tile * LEVEL_HEIGHT + y) * SEGMENT_WIDTH + x
}

impl DecoderParams {
    pub fn new(training: TrainingSet, seed: u64, input_dim: usize) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::UnsupportedDimension {
                problem: format!("{training} decoder"),
                dim: 0,
            });
        }
        let mut rng = rng::stream("decoder", &[training.tag(), seed, input_dim as u64]);
        let s1 = 1.0 / (input_dim as f64).sqrt();
        let s2 = 1.0 / (HIDDEN_WIDTH as f64).sqrt();
        let mut uniform =
            |n: usize, s: f64| -> Vec<f64> { (0..n).map(|_| rng.random_range(-s..=s)).collect() };
        let w1 = uniform(HIDDEN_WIDTH * input_dim, s1);
        let b1 = uniform(HIDDEN_WIDTH, s1);
        let w2 = uniform(OUTPUTS * HIDDEN_WIDTH, s2);
        let mut b2 = uniform(OUTPUTS, s2);

        for t in 0..TILE_COUNT {
            for y in 0..LEVEL_HEIGHT {
                let prior = TILE_PRIOR[prior_band(y)][t];
                for x in 0..SEGMENT_WIDTH {
                    b2[out_index(t, y, x)] += prior;
                }
            }
        }
        for &y in training.ground_rows() {
            for x in 0..SEGMENT_WIDTH {
                b2[out_index(Tile::Ground as usize, y, x)] += GROUND_OFFSET;
            }
        }
        Ok(Self {
            training,
            seed,
            input_dim,
            w1,
            b1,
            w2,
            b2,
        })
    }

    pub fn training(&self) -> TrainingSet {
        self.training
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    fn hidden(&self, z: &[f64]) -> [f64; HIDDEN_WIDTH] {
        let mut h = [0.0; HIDDEN_WIDTH];
        for (j, hj) in h.iter_mut().enumerate() {
            let row = &self.w1[j * self.input_dim..(j + 1) * self.input_dim];
            let a: f64 = row.iter().zip(z).map(|(w, v)| w * v).sum::<f64>() + self.b1[j];
            *hj = a.tanh();
        }
        h
    }

    /// Raw decoder output before the variant post-pass: argmax over tile
    /// scores with ties going to the lowest code.
    pub fn decode_raw(&self, z: &[f64]) -> Result<TileGrid> {
        self.check_latent(z)?;
        let h = self.hidden(z);
        let mut grid = TileGrid::filled(SEGMENT_WIDTH, LEVEL_HEIGHT, Tile::Air);
        for y in 0..LEVEL_HEIGHT {
            for x in 0..SEGMENT_WIDTH {
                let mut best = f64::NEG_INFINITY;
                let mut best_tile = Tile::Air;
                for (t, tile) in Tile::ALL.iter().enumerate() {
                    let o = out_index(t, y, x);
                    let w = &self.w2[o * HIDDEN_WIDTH..(o + 1) * HIDDEN_WIDTH];
                    let a: f64 = w.iter().zip(&h).map(|(a, b)| a * b).sum::<f64>() + self.b2[o];
                    let score = a.tanh();
                    if score > best {
                        best = score;
                        best_tile = *tile;
                    }
                }
                grid.set(x, y, best_tile);
            }
        }
        Ok(grid)
    }

    /// Decode one segment, including the overworld/underground post-pass.
    pub fn decode(&self, z: &[f64]) -> Result<TileGrid> {
        let mut grid = self.decode_raw(z)?;
        apply_variant(&mut grid, self.training);
        Ok(grid)
    }

    fn check_latent(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got: z.len(),
            });
        }
        for (i, &v) in z.iter().enumerate() {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::OutOfBounds {
                    index: i,
                    value: v,
                    lower: -1.0,
                    upper: 1.0,
                });
            }
        }
        Ok(())
    }
}

/// Underground: solid ceiling and floor rows. Overworld: the floor is solid
/// in every column whose bottom two rows already hold a standable tile,
/// leaving gaps elsewhere.
pub fn apply_variant(grid: &mut TileGrid, training: TrainingSet) {
    let bottom = grid.height() - 1;
    match training {
        TrainingSet::Underground => {
            for x in 0..grid.width() {
                grid.set(x, 0, Tile::Ground);
                grid.set(x, bottom, Tile::Ground);
            }
        }
        TrainingSet::Overworld => {
            for x in 0..grid.width() {
                let footing =
                    (bottom.saturating_sub(1)..=bottom).any(|y| grid.get(x, y).standable());
                if footing {
                    grid.set(x, bottom, Tile::Ground);
                }
            }
        }
    }
}
