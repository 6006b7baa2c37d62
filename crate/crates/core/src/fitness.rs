//! Tile-based level measures. All values lie in `[0,1]`, lower is better.

use serde::Serialize;

use crate::level::{LenientClass, TileGrid};

/// Gaps the player has to jump over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub n_gaps: usize,
    /// Mean gap length in columns; 0 when there are no gaps.
    pub mean_gap_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeniencyBreakdown {
    pub sum_p: usize,
    pub sum_n: usize,
    pub gaps: GapReport,
    pub v: f64,
    pub value: f64,
}

/// `1 - sd / m_sd` over the given coordinates, where `m_sd` is the largest
/// population standard deviation of values confined to `0..=extent-1`.
/// Fewer than two coordinates (or a unit extent) yields 1.
fn spread_measure(coords: impl Iterator<Item = usize>, extent: usize) -> f64 {
    let coords: Vec<f64> = coords.map(|c| c as f64).collect();
    let m_sd = (extent as f64 - 1.0) / 2.0;
    if coords.len() < 2 || m_sd <= 0.0 {
        return 1.0;
    }
    let n = coords.len() as f64;
    let mu = coords.iter().sum::<f64>() / n;
    let var = coords.iter().map(|c| (c - mu) * (c - mu)).sum::<f64>() / n;
    (1.0 - var.sqrt() / m_sd).clamp(0.0, 1.0)
}

/// Horizontal spread of enemies.
pub fn enemy_distribution(grid: &TileGrid) -> f64 {
    spread_measure(
        grid.iter().filter(|(_, _, t)| t.enemy()).map(|(x, _, _)| x),
        grid.width(),
    )
}

/// Vertical spread of standable tiles.
pub fn position_distribution(grid: &TileGrid) -> f64 {
    spread_measure(
        grid.iter()
            .filter(|(_, _, t)| t.standable())
            .map(|(_, y, _)| y),
        grid.height(),
    )
}

pub fn decoration_frequency(grid: &TileGrid) -> f64 {
    1.0 - grid.n_pretty() as f64 / grid.n_tot() as f64
}

pub fn negative_space(grid: &TileGrid) -> f64 {
    1.0 - grid.n_standable() as f64 / grid.n_tot() as f64
}

/// A gap is a maximal run of columns without any standable tile that does
/// not start at column 0.
pub fn detect_gaps(grid: &TileGrid) -> GapReport {
    let mut runs = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    for x in 0..grid.width() {
        if grid.column_has_standable(x) {
            if let Some(run) = current.take() {
                runs.push(run);
            }
        } else {
            current = Some(match current {
                Some((start, len)) => (start, len + 1),
                None => (x, 1),
            });
        }
    }
    runs.extend(current);
    let lengths: Vec<usize> = runs
        .into_iter()
        .filter(|&(start, _)| start > 0)
        .map(|(_, len)| len)
        .collect();
    let n_gaps = lengths.len();
    let mean_gap_length = if n_gaps == 0 {
        0.0
    } else {
        lengths.iter().sum::<usize>() as f64 / n_gaps as f64
    };
    GapReport {
        n_gaps,
        mean_gap_length,
    }
}

/// `(v / n_tot + 1) / 2` with `v/n_tot` clamped to `[-1, 1]`.
pub fn leniency(grid: &TileGrid) -> LeniencyBreakdown {
    let (mut sum_p, mut sum_n) = (0usize, 0usize);
    for (_, _, t) in grid.iter() {
        match t.lenient_class() {
            LenientClass::P => sum_p += 1,
            LenientClass::N => sum_n += 1,
            LenientClass::Neutral => {}
        }
    }
    let gaps = detect_gaps(grid);
    let v = sum_p as f64 - sum_n as f64 - gaps.n_gaps as f64 / 2.0 - gaps.mean_gap_length;
    let ratio = (v / grid.n_tot() as f64).clamp(-1.0, 1.0);
    LeniencyBreakdown {
        sum_p,
        sum_n,
        gaps,
        v,
        value: 0.5 * (ratio + 1.0),
    }
}
