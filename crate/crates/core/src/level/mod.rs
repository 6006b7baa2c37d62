//! Level representation and the latent-to-level decoder.

mod decoder;
mod grid;
mod tile;

pub use decoder::{apply_variant, DecoderParams, TrainingSet, HIDDEN_WIDTH};
pub use grid::{concatenate, TileGrid, LEVEL_HEIGHT, SEGMENT_WIDTH};
pub use tile::{LenientClass, Tile, TILE_COUNT};
