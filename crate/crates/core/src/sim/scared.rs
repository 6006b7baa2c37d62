use std::collections::BTreeSet;

use crate::level::Tile;

use super::physics::{Action, AgentState, Outcome, Physics};
use super::{Playthrough, SimulationResult};

const LOOKAHEAD: usize = 2;

/// Walks right and jumps whenever a wall, hazard or drop lies within the
/// lookahead. Never plans; any hazard contact ends the run.
pub(super) fn run(physics: &Physics<'_>, t_max: u32) -> Playthrough {
    let Some(mut s) = physics.spawn() else {
        return Playthrough::no_spawn(t_max);
    };
    let mut path = vec![(s.x, s.y)];
    let mut coins = BTreeSet::new();
    let (mut t, mut t_g, mut max_x) = (0u32, 0u32, 0usize);
    let mut won = false;
    if physics.tile(s.x, s.y) == Tile::Coin {
        coins.insert((s.x, s.y));
    }

    while t < t_max {
        let grounded = physics.grounded(&s);
        t += 1;
        if grounded {
            t_g += 1;
        }
        let outcome = preferences(physics, &s, grounded)
            .into_iter()
            .map(|a| physics.step(&s, a))
            .find(|o| *o != Outcome::Blocked)
            .unwrap_or(Outcome::Blocked);
        match outcome {
            Outcome::Exit => {
                won = true;
                break;
            }
            Outcome::Died => break,
            Outcome::Blocked => {}
            Outcome::Moved(next) => {
                let moved = (next.x, next.y) != (s.x, s.y);
                s = next;
                if moved {
                    path.push((s.x, s.y));
                    max_x = max_x.max(s.x);
                    if physics.tile(s.x, s.y) == Tile::Coin {
                        coins.insert((s.x, s.y));
                    }
                    if physics.hazard(s.x, s.y) {
                        break;
                    }
                }
            }
        }
    }

    Playthrough {
        result: SimulationResult {
            d_level: if won { physics.width() } else { max_x } as u32,
            t_level: t,
            n_coins: coins.len() as u32,
            t_g,
            t_tot: t,
            t_max,
            won,
        },
        path,
    }
}

fn preferences(physics: &Physics<'_>, s: &AgentState, grounded: bool) -> Vec<Action> {
    if !grounded {
        return vec![Action::Drift { right: s.air > 0 }];
    }
    if danger_ahead(physics, s) {
        vec![Action::Jump { right: true }, Action::Walk]
    } else {
        vec![Action::Walk]
    }
}

fn danger_ahead(physics: &Physics<'_>, s: &AgentState) -> bool {
    (1..=LOOKAHEAD)
        .map(|k| s.x + k)
        .take_while(|&x| x < physics.width())
        .any(|x| {
            physics.solid(x, s.y as isize) || physics.hazard(x, s.y) || !physics.supported(x, s.y)
        })
}
