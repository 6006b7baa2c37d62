//! Discrete movement model shared by both agents.
//!
//! The agent occupies one cell. Standable tiles are solid. Each tick the
//! agent either walks one column right, starts a jump, or (in the air) moves
//! one row up while rising or one row down while falling, optionally one
//! column right. A jump rises at most [`JUMP_RISE`] rows and allows at most
//! [`AIR_MOVES`] columns of horizontal travel before landing. Leaving the
//! grid through the bottom is death; stepping past the last column exits.

use crate::level::{Tile, TileGrid};

pub const JUMP_RISE: u8 = 4;
pub const AIR_MOVES: u8 = 6;
/// Extra ticks the planner pays for a hazard contact.
pub const HAZARD_PENALTY: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentState {
    pub x: usize,
    pub y: usize,
    /// Remaining ascent ticks; 0 when falling or grounded.
    pub rise: u8,
    /// Remaining horizontal air moves; reset on landing.
    pub air: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// Grounded: one column right.
    Walk,
    /// Grounded: start a jump, optionally drifting right on the first tick.
    Jump { right: bool },
    /// Airborne: continue the arc, optionally drifting right.
    Drift { right: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Moved(AgentState),
    Exit,
    Died,
    Blocked,
}

pub struct Physics<'a> {
    grid: &'a TileGrid,
}

impl<'a> Physics<'a> {
    pub fn new(grid: &'a TileGrid) -> Self {
        Self { grid }
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }

    pub fn tile(&self, x: usize, y: usize) -> Tile {
        self.grid.get(x, y)
    }

    /// Above the grid counts as solid, below and past the right edge as open.
    pub fn solid(&self, x: usize, y: isize) -> bool {
        if y < 0 {
            return true;
        }
        let y = y as usize;
        if y >= self.height() || x >= self.width() {
            return false;
        }
        self.grid.get(x, y).standable()
    }

    pub fn supported(&self, x: usize, y: usize) -> bool {
        self.solid(x, y as isize + 1)
    }

    pub fn grounded(&self, s: &AgentState) -> bool {
        s.rise == 0 && self.supported(s.x, s.y)
    }

    /// Highest open cell of column 0 that rests on a solid tile.
    pub fn spawn(&self) -> Option<AgentState> {
        if self.width() == 0 {
            return None;
        }
        (0..self.height())
            .find(|&y| !self.solid(0, y as isize) && self.supported(0, y))
            .map(|y| AgentState {
                x: 0,
                y,
                rise: 0,
                air: AIR_MOVES,
            })
    }

    /// Enemy or piranha tube in the cell, or a bullet bill column beside it.
    pub fn hazard(&self, x: usize, y: usize) -> bool {
        if x >= self.width() || y >= self.height() {
            return false;
        }
        if matches!(self.tile(x, y), Tile::Enemy | Tile::PiranhaTube) {
            return true;
        }
        let beside = |cx: usize| cx < self.width() && self.tile(cx, y) == Tile::BulletBillColumn;
        (x > 0 && beside(x - 1)) || beside(x + 1)
    }

    pub fn actions(&self, s: &AgentState) -> &'static [Action] {
        if self.grounded(s) {
            &[
                Action::Walk,
                Action::Jump { right: false },
                Action::Jump { right: true },
            ]
        } else {
            &[
                Action::Drift { right: false },
                Action::Drift { right: true },
            ]
        }
    }

    pub fn step(&self, s: &AgentState, action: Action) -> Outcome {
        let grounded = self.grounded(s);
        match action {
            Action::Walk => {
                if !grounded {
                    return Outcome::Blocked;
                }
                let tx = s.x + 1;
                if tx == self.width() {
                    return Outcome::Exit;
                }
                if self.solid(tx, s.y as isize) {
                    return Outcome::Blocked;
                }
                Outcome::Moved(self.settle(AgentState {
                    x: tx,
                    y: s.y,
                    rise: 0,
                    air: AIR_MOVES,
                }))
            }
            Action::Jump { right } => {
                if !grounded {
                    return Outcome::Blocked;
                }
                let launched = AgentState {
                    rise: JUMP_RISE,
                    air: AIR_MOVES,
                    ..*s
                };
                match self.airborne(&launched, right) {
                    // a jump that cannot leave the ground is no move at all
                    Outcome::Moved(n) if n.x == s.x && n.y == s.y => Outcome::Blocked,
                    other => other,
                }
            }
            Action::Drift { right } => {
                if grounded {
                    return Outcome::Blocked;
                }
                self.airborne(s, right)
            }
        }
    }

    fn airborne(&self, s: &AgentState, right: bool) -> Outcome {
        if right && s.air == 0 {
            return Outcome::Blocked;
        }
        let rising = s.rise > 0;
        let vy: isize = if rising { -1 } else { 1 };
        let dx = usize::from(right);
        // diagonal first, then straight vertical, then straight horizontal
        let candidates = [(dx, vy), (0, vy), (dx, 0)];
        let n = if right { 3 } else { 1 };
        for &(cdx, cdy) in &candidates[..n] {
            let tx = s.x + cdx;
            let ty = s.y as isize + cdy;
            if ty >= self.height() as isize {
                return Outcome::Died;
            }
            if tx == self.width() {
                return Outcome::Exit;
            }
            if self.solid(tx, ty) {
                continue;
            }
            let rise = if cdy < 0 { s.rise - 1 } else { 0 };
            let air = s.air - cdx as u8;
            return Outcome::Moved(self.settle(AgentState {
                x: tx,
                y: ty as usize,
                rise,
                air,
            }));
        }
        if rising {
            // bonk: stop rising in place
            Outcome::Moved(self.settle(AgentState { rise: 0, ..*s }))
        } else {
            Outcome::Blocked
        }
    }

    fn settle(&self, s: AgentState) -> AgentState {
        if s.rise == 0 && self.supported(s.x, s.y) {
            AgentState {
                air: AIR_MOVES,
                ..s
            }
        } else {
            s
        }
    }
}
