//! Agent playthroughs and the simulation-based measures.

mod astar;
mod physics;
mod scared;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::level::TileGrid;

pub use physics::{Action, AgentState, Outcome, Physics, AIR_MOVES, HAZARD_PENALTY, JUMP_RISE};

/// Allotted ticks per column of level.
pub const TICKS_PER_COLUMN: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentKind {
    /// Optimal planner over the movement model.
    Astar,
    /// Reactive agent that jumps at anything ahead.
    Scared,
}

impl AgentKind {
    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Astar => "astar",
            AgentKind::Scared => "scared",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "astar" => Ok(AgentKind::Astar),
            "scared" => Ok(AgentKind::Scared),
            other => Err(Error::Parse(format!("unknown agent `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationResult {
    /// Columns passed; the level width when won.
    pub d_level: u32,
    /// Ticks spent on the level (equal to `t_tot`).
    pub t_level: u32,
    pub n_coins: u32,
    /// Ticks that started on the ground.
    pub t_g: u32,
    pub t_tot: u32,
    pub t_max: u32,
    pub won: bool,
}

/// A result together with the cells the agent visited.
#[derive(Debug, Clone, PartialEq)]
pub struct Playthrough {
    pub result: SimulationResult,
    pub path: Vec<(usize, usize)>,
}

impl Playthrough {
    fn no_spawn(t_max: u32) -> Self {
        Self {
            result: SimulationResult {
                d_level: 0,
                t_level: 0,
                n_coins: 0,
                t_g: 0,
                t_tot: 0,
                t_max,
                won: false,
            },
            path: Vec::new(),
        }
    }

    /// The level rendering with the path drawn as `*`.
    pub fn overlay(&self, grid: &TileGrid) -> String {
        let mut rows: Vec<Vec<char>> = grid
            .render_ascii()
            .split('\n')
            .map(|r| r.chars().collect())
            .collect();
        for &(x, y) in &self.path {
            rows[y][x] = '*';
        }
        rows.into_iter()
            .map(|r| r.into_iter().collect::<String>())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn time_budget(grid: &TileGrid) -> u32 {
    TICKS_PER_COLUMN * grid.width() as u32
}

pub fn playthrough(grid: &TileGrid, agent: AgentKind) -> Playthrough {
    let physics = Physics::new(grid);
    let t_max = time_budget(grid);
    match agent {
        AgentKind::Astar => astar::run(&physics, t_max),
        AgentKind::Scared => scared::run(&physics, t_max),
    }
}

pub fn simulate(grid: &TileGrid, agent: AgentKind) -> SimulationResult {
    playthrough(grid, agent).result
}

/// Championship-style score, normalised and clamped to `[0,1]`.
pub fn basic_fitness(r: &SimulationResult) -> f64 {
    let won = if r.won { 5000.0 } else { 0.0 };
    let v = (r.d_level as f64 - r.t_level as f64 + r.n_coins as f64 + won) / 5000.0;
    ((v + 0.04) / 1.26).clamp(0.0, 1.0)
}

/// Share of ground ticks on a completed level, 1 otherwise.
pub fn air_time(r: &SimulationResult) -> f64 {
    if r.won && r.t_tot > 0 {
        r.t_g as f64 / r.t_tot as f64
    } else {
        1.0
    }
}

/// `1 - t_tot / t_max` on a completed level, 1 otherwise.
pub fn time_taken(r: &SimulationResult) -> f64 {
    if r.won {
        (1.0 - r.t_tot as f64 / r.t_max as f64).clamp(0.0, 1.0)
    } else {
        1.0
    }
}
