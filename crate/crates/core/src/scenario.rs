//! One network snapshot: terrestrial UE placement, per-RB occupancy, UAV
//! placement, and UAV-BS association.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Result, SimError};
use crate::geometry::{neighbor_set, sample_uniform_in_cell, CellId, HexGrid, Position3D};

const PLACEMENT_RETRY_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UePlacement {
    pub cell: CellId,
    pub rb: usize,
    pub pos: Position3D,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub grid: HexGrid,
    pub n_rbs: usize,
    pub ues: Vec<UePlacement>,
    /// occupancy[n] = set of cells with a terrestrial UE on RB n.
    pub occupancy: Vec<BTreeSet<CellId>>,
    pub uav_pos: Position3D,
    pub serving_bs: CellId,
    pub q: u32,
}

impl Scenario {
    pub fn occupants(&self, rb: usize) -> &BTreeSet<CellId> {
        &self.occupancy[rb]
    }

    pub fn ue_at(&self, cell: CellId, rb: usize) -> Option<&UePlacement> {
        self.ues.iter().find(|u| u.cell == cell && u.rb == rb)
    }

    /// Structural consistency checks, used after deserializing snapshots.
    pub fn validate(&self) -> Result<()> {
        if self.occupancy.len() != self.n_rbs {
            return Err(SimError::Config(
                "occupancy length does not match n_rbs".into(),
            ));
        }
        let mut derived = vec![BTreeSet::new(); self.n_rbs];
        for ue in &self.ues {
            if ue.rb >= self.n_rbs {
                return Err(SimError::Config(format!("UE RB index {} out of range", ue.rb)));
            }
            self.grid.center(ue.cell)?;
            if !derived[ue.rb].insert(ue.cell) {
                return Err(SimError::Config(format!(
                    "duplicate UE in cell {} on RB {}",
                    ue.cell.0, ue.rb
                )));
            }
        }
        if derived != self.occupancy {
            return Err(SimError::Config(
                "occupancy map is not the projection of the UE list".into(),
            ));
        }
        self.grid.center(self.serving_bs)?;
        Ok(())
    }
}

/// Generate one snapshot.
///
/// UEs are placed by rejection sampling over (cell, RB) pairs; with
/// `icic_constrained` the occupants of each RB stay pairwise outside each
/// other's q-tier neighborhoods (terrestrial ICIC already in force).
/// The UAV is uniform in cell 1 at `uav_altitude`; its serving BS is the
/// one with the smallest LoS path loss, ties broken by lowest cell id.
pub fn generate_scenario<R: Rng + ?Sized>(
    grid: &HexGrid,
    n_rbs: usize,
    n_ues: usize,
    q: u32,
    uav_altitude: f64,
    icic_constrained: bool,
    rng: &mut R,
) -> Result<Scenario> {
    if n_rbs == 0 {
        return Err(SimError::InvalidParameter("n_rbs must be positive".into()));
    }
    let num_cells = grid.num_cells();
    let mut occupancy: Vec<BTreeSet<CellId>> = vec![BTreeSet::new(); n_rbs];
    let mut ues = Vec::with_capacity(n_ues);

    for ue_index in 0..n_ues {
        let mut placed = false;
        for _ in 0..PLACEMENT_RETRY_BUDGET {
            let cell = CellId(rng.gen_range(1..=num_cells as u32));
            let rb = rng.gen_range(0..n_rbs);
            if occupancy[rb].contains(&cell) {
                continue;
            }
            if icic_constrained {
                let hood = neighbor_set(grid, cell, q)?;
                if hood.iter().any(|c| occupancy[rb].contains(c)) {
                    continue;
                }
            }
            let pos = sample_uniform_in_cell(grid, cell, rng)?;
            occupancy[rb].insert(cell);
            ues.push(UePlacement { cell, rb, pos });
            placed = true;
            break;
        }
        if !placed {
            return Err(SimError::InfeasibleOccupancy {
                ue_index,
                attempts: PLACEMENT_RETRY_BUDGET,
            });
        }
    }

    let ground = sample_uniform_in_cell(grid, CellId(1), rng)?;
    let uav_pos = Position3D::new(ground.x, ground.y, uav_altitude);

    // association by smallest LoS path loss = smallest 3-D distance
    let serving_bs = grid
        .cell_ids()
        .map(|j| (j, grid.bs_position(j).unwrap().distance(&uav_pos)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)))
        .map(|(j, _)| j)
        .unwrap();

    Ok(Scenario {
        grid: grid.clone(),
        n_rbs,
        ues,
        occupancy,
        uav_pos,
        serving_bs,
        q,
    })
}

/// Omega: RBs with no occupant anywhere in N_j(q). The same rule serves
/// both link directions.
pub fn available_rbs(scenario: &Scenario, j: CellId) -> Result<BTreeSet<usize>> {
    let hood: BTreeSet<CellId> = neighbor_set(&scenario.grid, j, scenario.q)?
        .into_iter()
        .collect();
    Ok((0..scenario.n_rbs)
        .filter(|&n| scenario.occupancy[n].is_disjoint(&hood))
        .collect())
}
