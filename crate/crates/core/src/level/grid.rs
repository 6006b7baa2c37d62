use std::fmt;

use crate::error::{Error, Result};

use super::tile::Tile;

/// Columns of one decoded segment.
pub const SEGMENT_WIDTH: usize = 28;
/// Rows of every level.
pub const LEVEL_HEIGHT: usize = 14;

/// A level: `height` rows of `width` tiles, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TileGrid {
    width: usize,
    height: usize,
    cells: Vec<Tile>,
}

impl TileGrid {
    pub fn filled(width: usize, height: usize, tile: Tile) -> Self {
        Self {
            width,
            height,
            cells: vec![tile; width * height],
        }
    }

    /// Build from rows (top first). Rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Tile>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Parse("ragged rows".into()));
        }
        Ok(Self {
            width,
            height,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Tile {
        self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, tile: Tile) {
        self.cells[y * self.width + x] = tile;
    }

    /// Cells with their coordinates, row by row.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Tile)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, &t)| (i % self.width, i / self.width, t))
    }

    pub fn row(&self, y: usize) -> &[Tile] {
        &self.cells[y * self.width..(y + 1) * self.width]
    }

    pub fn count(&self, tile: Tile) -> usize {
        self.cells.iter().filter(|&&t| t == tile).count()
    }

    /// `n_tot`
    pub fn n_tot(&self) -> usize {
        self.cells.len()
    }

    /// `n_st`: tiles the player can stand on.
    pub fn n_standable(&self) -> usize {
        self.cells.iter().filter(|t| t.standable()).count()
    }

    /// `n_pt`: pretty tiles.
    pub fn n_pretty(&self) -> usize {
        self.cells.iter().filter(|t| t.pretty()).count()
    }

    pub fn column_has_standable(&self, x: usize) -> bool {
        (0..self.height).any(|y| self.get(x, y).standable())
    }

    /// One glyph per cell, rows joined by `\n`, no trailing newline.
    pub fn render_ascii(&self) -> String {
        let mut out = String::with_capacity(self.cells.len() + self.height);
        for y in 0..self.height {
            if y > 0 {
                out.push('\n');
            }
            out.extend(self.row(y).iter().map(|t| t.glyph()));
        }
        out
    }

    /// Inverse of [`render_ascii`](Self::render_ascii). A single trailing
    /// newline is tolerated.
    pub fn parse_ascii(text: &str) -> Result<Self> {
        let text = text.strip_suffix('\n').unwrap_or(text);
        if text.is_empty() {
            return Err(Error::EmptyInput);
        }
        let rows = text
            .split('\n')
            .map(|line| {
                line.chars()
                    .map(|c| {
                        Tile::from_glyph(c)
                            .ok_or_else(|| Error::Parse(format!("unknown tile glyph {c:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

impl fmt::Display for TileGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_ascii())
    }
}

/// Join segments left to right.
pub fn concatenate(segments: &[TileGrid]) -> Result<TileGrid> {
    let first = segments.first().ok_or(Error::EmptyInput)?;
    let height = first.height;
    if let Some(bad) = segments.iter().find(|g| g.height != height) {
        return Err(Error::HeightMismatch(height, bad.height));
    }
    let width: usize = segments.iter().map(|g| g.width).sum();
    let mut cells = Vec::with_capacity(width * height);
    for y in 0..height {
        for g in segments {
            cells.extend_from_slice(g.row(y));
        }
    }
    Ok(TileGrid {
        width,
        height,
        cells,
    })
}
