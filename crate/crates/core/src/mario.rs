//! The 28 level-generation problems: a fitness measure, a training set and,
//! for simulation-based measures, an agent; some problems concatenate two or
//! more decoded segments into one longer level.

use std::fmt;

use crate::error::{Error, Result};
use crate::fitness;
use crate::level::{concatenate, DecoderParams, TileGrid, TrainingSet};
use crate::sim::{self, AgentKind};

/// Instance seeds of every problem.
pub const INSTANCE_SEEDS: std::ops::RangeInclusive<u64> = 1..=7;
pub const PROBLEM_COUNT: u8 = 28;
/// Latent block size of one segment in concatenated problems.
pub const SEGMENT_LATENT_DIM: usize = 5;
pub const DEFAULT_DIM: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    EnemyDistribution,
    PositionDistribution,
    DecorationFrequency,
    NegativeSpace,
    Leniency,
    BasicFitness,
    AirTime,
    TimeTaken,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::EnemyDistribution => "enemyDistribution",
            Measure::PositionDistribution => "positionDistribution",
            Measure::DecorationFrequency => "decorationFrequency",
            Measure::NegativeSpace => "negativeSpace",
            Measure::Leniency => "leniency",
            Measure::BasicFitness => "basicFitness",
            Measure::AirTime => "airTime",
            Measure::TimeTaken => "timeTaken",
        }
    }

    pub fn simulated(self) -> bool {
        matches!(
            self,
            Measure::BasicFitness | Measure::AirTime | Measure::TimeTaken
        )
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of the problem table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarioSpec {
    pub index: u8,
    pub measure: Measure,
    pub agent: Option<AgentKind>,
    pub training: TrainingSet,
    pub concatenated: bool,
}

impl MarioSpec {
    pub fn variant(&self) -> &'static str {
        match (self.training, self.concatenated) {
            (TrainingSet::Overworld, false) => "o",
            (TrainingSet::Underground, false) => "u",
            (TrainingSet::Overworld, true) => "oc",
            (TrainingSet::Underground, true) => "uc",
        }
    }
}

/// m1..m28 in order.
pub fn table() -> Vec<MarioSpec> {
    use Measure::*;
    use TrainingSet::{Overworld as O, Underground as U};
    let astar = Some(AgentKind::Astar);
    let scared = Some(AgentKind::Scared);
    let mut rows: Vec<(Measure, Option<AgentKind>, TrainingSet, bool)> = Vec::new();
    for m in [
        EnemyDistribution,
        PositionDistribution,
        DecorationFrequency,
        NegativeSpace,
        Leniency,
    ] {
        rows.push((m, None, O, false));
        rows.push((m, None, U, false));
    }
    for m in [BasicFitness, AirTime, TimeTaken] {
        rows.push((m, astar, O, false));
        rows.push((m, astar, U, false));
        rows.push((m, astar, O, true));
        rows.push((m, astar, U, true));
        rows.push((m, scared, O, false));
        rows.push((m, scared, U, false));
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, (measure, agent, training, concatenated))| MarioSpec {
            index: i as u8 + 1,
            measure,
            agent,
            training,
            concatenated,
        })
        .collect()
}

pub fn spec(index: u8) -> Result<MarioSpec> {
    if !(1..=PROBLEM_COUNT).contains(&index) {
        return Err(Error::UnknownProblem(format!("m{index}")));
    }
    Ok(table()[index as usize - 1])
}

/// An instantiated problem: spec plus decoder weights for one seed.
#[derive(Debug, Clone)]
pub struct MarioProblem {
    spec: MarioSpec,
    dim: usize,
    decoder: DecoderParams,
}

impl MarioProblem {
    pub fn new(index: u8, seed: u64, dim: usize) -> Result<Self> {
        let spec = spec(index)?;
        if !INSTANCE_SEEDS.contains(&seed) {
            return Err(Error::UnsupportedSeed {
                problem: format!("m{index}"),
                seed,
                allowed: "1..=7",
            });
        }
        if dim < 2 {
            return Err(Error::UnsupportedDimension {
                problem: format!("m{index}"),
                dim,
            });
        }
        let input_dim = if spec.concatenated {
            SEGMENT_LATENT_DIM
        } else {
            dim
        };
        let decoder = DecoderParams::new(spec.training, seed, input_dim)?;
        Ok(Self { spec, dim, decoder })
    }

    pub fn spec(&self) -> &MarioSpec {
        &self.spec
    }

    pub fn decoder(&self) -> &DecoderParams {
        &self.decoder
    }

    pub fn segments(&self) -> usize {
        if self.spec.concatenated {
            self.dim.div_ceil(SEGMENT_LATENT_DIM)
        } else {
            1
        }
    }

    /// Decode the level for latent `z`. Concatenated problems split `z`
    /// into consecutive blocks, zero-padding the last one.
    pub fn level(&self, z: &[f64]) -> Result<TileGrid> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        if !self.spec.concatenated {
            return self.decoder.decode(z);
        }
        let segments = z
            .chunks(SEGMENT_LATENT_DIM)
            .map(|block| {
                let mut padded = block.to_vec();
                padded.resize(SEGMENT_LATENT_DIM, 0.0);
                self.decoder.decode(&padded)
            })
            .collect::<Result<Vec<_>>>()?;
        concatenate(&segments)
    }

    /// Fitness of a decoded level, clamped to `[0,1]`.
    pub fn score(&self, grid: &TileGrid) -> f64 {
        let value = match self.spec.measure {
            Measure::EnemyDistribution => fitness::enemy_distribution(grid),
            Measure::PositionDistribution => fitness::position_distribution(grid),
            Measure::DecorationFrequency => fitness::decoration_frequency(grid),
            Measure::NegativeSpace => fitness::negative_space(grid),
            Measure::Leniency => fitness::leniency(grid).value,
            simulated => {
                let agent = self.spec.agent.unwrap_or(AgentKind::Astar);
                let r = sim::simulate(grid, agent);
                match simulated {
                    Measure::BasicFitness => sim::basic_fitness(&r),
                    Measure::AirTime => sim::air_time(&r),
                    _ => sim::time_taken(&r),
                }
            }
        };
        value.clamp(0.0, 1.0)
    }

    pub fn value(&self, z: &[f64]) -> Result<f64> {
        Ok(self.score(&self.level(z)?))
    }
}
