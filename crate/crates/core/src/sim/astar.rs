use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::level::Tile;

use super::physics::{AgentState, Outcome, Physics, AIR_MOVES, HAZARD_PENALTY, JUMP_RISE};
use super::{Playthrough, SimulationResult};

const RISE_STATES: usize = JUMP_RISE as usize + 1;
const AIR_STATES: usize = AIR_MOVES as usize + 1;

struct StateSpace {
    height: usize,
}

impl StateSpace {
    fn index(&self, s: &AgentState) -> usize {
        ((s.x * self.height + s.y) * RISE_STATES + s.rise as usize) * AIR_STATES + s.air as usize
    }

    fn state(&self, mut i: usize) -> AgentState {
        let air = (i % AIR_STATES) as u8;
        i /= AIR_STATES;
        let rise = (i % RISE_STATES) as u8;
        i /= RISE_STATES;
        AgentState {
            x: i / self.height,
            y: i % self.height,
            rise,
            air,
        }
    }
}

// Path cost is lexicographic: ticks first, then airborne ticks, so among
// equally fast routes the planner stays on the ground.
const TICK: u64 = 1 << 16;

/// Minimum-time search to the exit with an admissible columns-remaining
/// heuristic. Hazard contacts cost extra ticks instead of ending the run.
pub(super) fn run(physics: &Physics<'_>, t_max: u32) -> Playthrough {
    let Some(spawn) = physics.spawn() else {
        return Playthrough::no_spawn(t_max);
    };
    let width = physics.width();
    let space = StateSpace {
        height: physics.height(),
    };
    let n = width * physics.height() * RISE_STATES * AIR_STATES;
    let goal = n;
    let mut dist = vec![u64::MAX; n + 1];
    let mut parent = vec![usize::MAX; n + 1];
    let mut closed = vec![false; n + 1];
    let h = |x: usize| (width - x) as u64 * TICK;

    let start = space.index(&spawn);
    dist[start] = 0;
    let mut open = BinaryHeap::new();
    open.push(Reverse((h(spawn.x), 0u64, start)));
    let mut farthest = start;

    while let Some(Reverse((_, g, i))) = open.pop() {
        if closed[i] || g > dist[i] {
            continue;
        }
        closed[i] = true;
        if i == goal {
            break;
        }
        let s = space.state(i);
        if s.x > space.state(farthest).x {
            farthest = i;
        }
        let airborne = u64::from(!physics.grounded(&s));
        for &action in physics.actions(&s) {
            let (j, ticks) = match physics.step(&s, action) {
                Outcome::Moved(next) => {
                    let moved = (next.x, next.y) != (s.x, s.y);
                    let penalty = if moved && physics.hazard(next.x, next.y) {
                        HAZARD_PENALTY
                    } else {
                        0
                    };
                    (space.index(&next), 1 + penalty)
                }
                Outcome::Exit => (goal, 1),
                Outcome::Died | Outcome::Blocked => continue,
            };
            let ng = g + u64::from(ticks) * TICK + airborne;
            if ng / TICK <= u64::from(t_max) && ng < dist[j] {
                dist[j] = ng;
                parent[j] = i;
                let hj = if j == goal { 0 } else { h(space.state(j).x) };
                open.push(Reverse((ng + hj, ng, j)));
            }
        }
    }

    let won = closed[goal];
    let end = if won { goal } else { farthest };
    let mut chain = vec![end];
    while let Some(&last) = chain.last() {
        let p = parent[last];
        if p == usize::MAX {
            break;
        }
        chain.push(p);
    }
    chain.reverse();

    let states: Vec<AgentState> = chain
        .iter()
        .filter(|&&i| i != goal)
        .map(|&i| space.state(i))
        .collect();
    // every transition out of a grounded state is a ground tick
    let transitions = chain.len() - 1;
    let t_g = states[..transitions]
        .iter()
        .filter(|s| physics.grounded(s))
        .count() as u32;
    let mut coins: Vec<(usize, usize)> = states
        .iter()
        .filter(|s| physics.tile(s.x, s.y) == Tile::Coin)
        .map(|s| (s.x, s.y))
        .collect();
    coins.sort_unstable();
    coins.dedup();

    let (d_level, t_tot) = if won {
        (width as u32, (dist[goal] / TICK) as u32)
    } else {
        (states.last().map_or(0, |s| s.x) as u32, t_max)
    };
    Playthrough {
        result: SimulationResult {
            d_level,
            t_level: t_tot,
            n_coins: coins.len() as u32,
            t_g,
            t_tot,
            t_max,
            won,
        },
        path: states.iter().map(|s| (s.x, s.y)).collect(),
    }
}
