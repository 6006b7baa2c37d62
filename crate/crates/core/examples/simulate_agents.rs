//! Play one level with both agents and show their paths.
//!
//! cargo run --example simulate_agents

use landscape_atlas::level::TileGrid;
use landscape_atlas::sim::{self, AgentKind};

const LEVEL: &str = "\
----------------------------
----------------------------
----------------------------
----------------------------
----------------------------
----------------------------
--------o-o-----------------
----------------------------
-------SSS--------o---------
----------------------------
------------------S---------
---------------E------------
XXXXXXXXXXX---XXXXXXX--XXXXX
XXXXXXXXXXX---XXXXXXX--XXXXX";

fn main() -> landscape_atlas::Result<()> {
    let grid = TileGrid::parse_ascii(LEVEL)?;
    for agent in [AgentKind::Astar, AgentKind::Scared] {
        let play = sim::playthrough(&grid, agent);
        let r = play.result;
        println!(
            "{agent}: won={} d_level={} t_tot={}/{} coins={} ground ticks={}",
            r.won, r.d_level, r.t_tot, r.t_max, r.n_coins, r.t_g
        );
        println!(
            "  basicFitness={:.4} airTime={:.4} timeTaken={:.4}",
            sim::basic_fitness(&r),
            sim::air_time(&r),
            sim::time_taken(&r)
        );
        println!("{}\n", play.overlay(&grid));
    }
    Ok(())
}
