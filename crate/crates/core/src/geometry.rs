//! Hexagonal multi-tier cell layout, neighbor sets, uniform in-cell sampling,
//! and the worst-case UAV-BS/UAV-UE distance-ratio bound used by the robust
//! uplink power control.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// 1-based cell identifier; cell 1 is the center cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub u32);

impl CellId {
    /// Zero-based index into `HexGrid::centers`.
    pub fn idx(self) -> usize {
        (self.0 - 1) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        debug_assert!(z >= 0.0);
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn horizontal_distance(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Hexagonal cell layout: a center cell surrounded by `tiers` rings.
///
/// `cell_radius_m` is the hexagon circumradius; adjacent cell centers are
/// sqrt(3) * R_c apart. Cells are enumerated tier by tier, counterclockwise
/// from the +x axis, so ids are stable across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HexGrid {
    pub tiers: u32,
    pub cell_radius_m: f64,
    pub bs_height_m: f64,
    pub centers: Vec<[f64; 2]>,
}

impl HexGrid {
    pub fn num_cells(&self) -> usize {
        self.centers.len()
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> {
        (1..=self.centers.len() as u32).map(CellId)
    }

    pub fn center(&self, j: CellId) -> Result<[f64; 2]> {
        self.centers
            .get(j.idx())
            .copied()
            .ok_or(SimError::UnknownCell(j.0))
    }

    pub fn bs_position(&self, j: CellId) -> Result<Position3D> {
        let c = self.center(j)?;
        Ok(Position3D::new(c[0], c[1], self.bs_height_m))
    }

    /// Inter-site distance between adjacent cells.
    pub fn site_distance(&self) -> f64 {
        3f64.sqrt() * self.cell_radius_m
    }
}

pub fn build_grid(tiers: u32, cell_radius_m: f64, bs_height_m: f64) -> Result<HexGrid> {
    if cell_radius_m <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "cell radius must be positive, got {cell_radius_m}"
        )));
    }
    if bs_height_m < 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "BS height must be nonnegative, got {bs_height_m}"
        )));
    }
    let isd = 3f64.sqrt() * cell_radius_m;
    let t = tiers as i64;

    // Axial hex coordinates; hex distance from origin gives the tier.
    let mut cells: Vec<(i64, f64, [f64; 2])> = Vec::new();
    for q in -t..=t {
        for r in (-t).max(-q - t)..=t.min(-q + t) {
            let tier = (q.abs() + r.abs() + (q + r).abs()) / 2;
            let x = isd * (q as f64 + r as f64 / 2.0);
            let y = isd * (3f64.sqrt() / 2.0) * r as f64;
            let angle = if tier == 0 {
                0.0
            } else {
                let a = y.atan2(x);
                // counterclockwise from +x, with a small bias so the cell
                // exactly on the +x axis sorts first despite rounding
                if a < -1e-9 {
                    a + std::f64::consts::TAU
                } else {
                    a
                }
            };
            cells.push((tier, angle, [x, y]));
        }
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));

    Ok(HexGrid {
        tiers,
        cell_radius_m,
        bs_height_m,
        centers: cells.into_iter().map(|c| c.2).collect(),
    })
}

/// N_j(q): all cells whose center lies within q inter-site distances of
/// cell j's center, including j itself.
pub fn neighbor_set(grid: &HexGrid, j: CellId, q: u32) -> Result<Vec<CellId>> {
    let cj = grid.center(j)?;
    let tol = 1e-6 * grid.cell_radius_m;
    let threshold = q as f64 * grid.site_distance() + tol;
    Ok(grid
        .cell_ids()
        .filter(|&i| {
            let ci = grid.centers[i.idx()];
            let d = ((ci[0] - cj[0]).powi(2) + (ci[1] - cj[1]).powi(2)).sqrt();
            d <= threshold
        })
        .collect())
}

/// Is `p` (relative to the cell center) inside the hexagon of circumradius
/// `r_c`? Edges are normal to the three neighbor axes at the apothem.
fn in_hexagon(dx: f64, dy: f64, r_c: f64) -> bool {
    let apothem = 3f64.sqrt() / 2.0 * r_c;
    for k in 0..3 {
        let a = std::f64::consts::PI / 3.0 * k as f64;
        let proj = dx * a.cos() + dy * a.sin();
        if proj.abs() > apothem {
            return false;
        }
    }
    true
}

/// Uniform point in the closed hexagon of cell j, at ground level (z = 0).
pub fn sample_uniform_in_cell<R: Rng + ?Sized>(
    grid: &HexGrid,
    j: CellId,
    rng: &mut R,
) -> Result<Position3D> {
    let c = grid.center(j)?;
    let r_c = grid.cell_radius_m;
    loop {
        let dx = rng.gen_range(-r_c..=r_c);
        let dy = rng.gen_range(-r_c..=r_c);
        if in_hexagon(dx, dy, r_c) {
            return Ok(Position3D::new(c[0] + dx, c[1] + dy, 0.0));
        }
    }
}

/// Lower bound rho on d_j / a_j(n): the ratio of UAV-BS distance to UAV-UE
/// distance, minimized over all BS placements within R_c of the UE.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RhoBound {
    /// Worst-case distance ratio, in (0, 1).
    pub rho: f64,
    /// Horizontal UAV-UE distance at which the minimum is attained.
    pub xi_m: f64,
}

/// Closed-form worst-case distance ratio for a UAV at altitude `h_u` over
/// BSs of height `h_b` in cells of circumradius `r_c`.
pub fn worst_case_ratio(h_u: f64, h_b: f64, r_c: f64) -> Result<RhoBound> {
    if r_c <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "cell radius must be positive, got {r_c}"
        )));
    }
    if h_b < 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "BS height must be nonnegative, got {h_b}"
        )));
    }
    if h_u <= h_b {
        return Err(SimError::Domain(format!(
            "UAV altitude ({h_u} m) must exceed BS height ({h_b} m)"
        )));
    }
    let a = r_c * r_c + h_b * h_b - 2.0 * h_u * h_b;
    let xi = (a + (a * a + 4.0 * r_c * r_c * h_u * h_u).sqrt()) / (2.0 * r_c);
    let dh = h_u - h_b;
    let rho = (((xi - r_c).powi(2) + dh * dh) / (xi * xi + h_u * h_u)).sqrt();
    debug_assert!(rho > 0.0 && rho < 1.0);
    Ok(RhoBound { rho, xi_m: xi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn grid_cell_counts() {
        assert_eq!(build_grid(0, 800.0, 25.0).unwrap().num_cells(), 1);
        assert_eq!(build_grid(1, 800.0, 25.0).unwrap().num_cells(), 7);
        assert_eq!(build_grid(3, 800.0, 25.0).unwrap().num_cells(), 37);
    }

    #[test]
    fn grid_center_at_origin() {
        let g = build_grid(3, 800.0, 25.0).unwrap();
        assert_eq!(g.centers[0], [0.0, 0.0]);
    }

    #[test]
    fn tier1_centers_at_isd() {
        let g = build_grid(1, 800.0, 25.0).unwrap();
        let isd = 3f64.sqrt() * 800.0;
        for c in &g.centers[1..] {
            let d = (c[0] * c[0] + c[1] * c[1]).sqrt();
            assert_relative_eq!(d, isd, max_relative = 1e-9);
        }
        // first outer cell on the +x axis
        assert_relative_eq!(g.centers[1][0], isd, max_relative = 1e-9);
        assert!(g.centers[1][1].abs() < 1e-6);
    }

    #[test]
    fn adjacent_cells_at_sqrt3_rc() {
        let g = build_grid(3, 800.0, 25.0).unwrap();
        let isd = g.site_distance();
        // every cell has at least two neighbors at exactly one ISD
        for i in 0..g.num_cells() {
            let mut adjacent = 0;
            for j in 0..g.num_cells() {
                if i == j {
                    continue;
                }
                let d = ((g.centers[i][0] - g.centers[j][0]).powi(2)
                    + (g.centers[i][1] - g.centers[j][1]).powi(2))
                .sqrt();
                if (d - isd).abs() < 1e-9 * isd {
                    adjacent += 1;
                }
            }
            assert!(adjacent >= 2);
        }
    }

    #[test]
    fn invalid_radius_rejected() {
        assert!(build_grid(3, 0.0, 25.0).is_err());
        assert!(build_grid(3, -1.0, 25.0).is_err());
    }

    #[test]
    fn neighbor_set_center_q1() {
        let g = build_grid(3, 800.0, 25.0).unwrap();
        assert_eq!(neighbor_set(&g, CellId(1), 1).unwrap().len(), 7);
    }

    #[test]
    fn neighbor_set_q0_is_self() {
        let g = build_grid(3, 800.0, 25.0).unwrap();
        for j in g.cell_ids() {
            assert_eq!(neighbor_set(&g, j, 0).unwrap(), vec![j]);
        }
    }

    #[test]
    fn neighbor_set_edge_cell_truncated() {
        let g = build_grid(3, 800.0, 25.0).unwrap();
        // cells in the outermost tier have fewer than 7 one-tier neighbors
        let outer_start = 1 + 6 + 12; // cells before tier 3
        for idx in outer_start..g.num_cells() {
            let n = neighbor_set(&g, CellId(idx as u32 + 1), 1).unwrap();
            assert!(n.len() < 7, "outer cell had {} neighbors", n.len());
        }
    }

    #[test]
    fn neighbor_set_unknown_cell() {
        let g = build_grid(1, 800.0, 25.0).unwrap();
        assert!(neighbor_set(&g, CellId(99), 1).is_err());
    }

    #[test]
    fn uniform_sampling_symmetry_and_support() {
        let g = build_grid(1, 800.0, 25.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let n = 100_000;
        let mut sum = [0.0f64; 2];
        let mut inside_incircle = 0usize;
        let inradius = 3f64.sqrt() / 2.0 * 800.0;
        for _ in 0..n {
            let p = sample_uniform_in_cell(&g, CellId(1), &mut rng).unwrap();
            assert_eq!(p.z, 0.0);
            let r = (p.x * p.x + p.y * p.y).sqrt();
            assert!(r <= 800.0 + 1e-9);
            if r <= inradius {
                inside_incircle += 1;
            }
            sum[0] += p.x;
            sum[1] += p.y;
        }
        assert!(sum[0].abs() / n as f64 <= 0.01 * 800.0);
        assert!(sum[1].abs() / n as f64 <= 0.01 * 800.0);
        // incircle-to-hexagon area ratio = pi*sqrt(3)/6
        let frac = inside_incircle as f64 / n as f64;
        let expected = std::f64::consts::PI * 3f64.sqrt() / 6.0;
        assert!((frac - expected).abs() < 0.005, "incircle fraction {frac}");
    }

    #[test]
    fn rho_reference_values() {
        let b = worst_case_ratio(200.0, 25.0, 800.0).unwrap();
        assert_relative_eq!(b.xi_m, 836.12, max_relative = 1e-4);
        assert_relative_eq!(b.rho, 0.2079, max_relative = 1e-3);
        assert!(b.xi_m > 800.0);
    }

    #[test]
    fn rho_requires_uav_above_bs() {
        assert!(matches!(
            worst_case_ratio(25.0, 25.0, 800.0),
            Err(SimError::Domain(_))
        ));
        assert!(worst_case_ratio(10.0, 25.0, 800.0).is_err());
    }

    /// Randomized check of the distance-ratio bound: UE anywhere on the
    /// ground, BS anywhere within R_c of the UE, UAV overhead.
    #[test]
    fn rho_lower_bounds_sampled_ratios() {
        let (h_u, h_b, r_c) = (200.0, 25.0, 800.0);
        let rho = worst_case_ratio(h_u, h_b, r_c).unwrap().rho;
        let uav = Position3D::new(0.0, 0.0, h_u);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut min_ratio = f64::INFINITY;
        for _ in 0..200_000 {
            let r = 5000.0 * rng.gen::<f64>().sqrt();
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let ue = Position3D::new(r * a.cos(), r * a.sin(), 0.0);
            let rb = r_c * rng.gen::<f64>().sqrt();
            let ab = rng.gen_range(0.0..std::f64::consts::TAU);
            let bs = Position3D::new(ue.x + rb * ab.cos(), ue.y + rb * ab.sin(), h_b);
            let ratio = uav.distance(&bs) / uav.distance(&ue);
            min_ratio = min_ratio.min(ratio);
            assert!(ratio >= rho, "ratio {ratio} < rho {rho}");
        }
        assert!(min_ratio < 1.0);
    }

    proptest! {
        #[test]
        fn neighbor_set_symmetric_and_bounded(
            tiers in 0u32..4,
            q in 0u32..4,
            r_c in 100f64..2000.0,
        ) {
            let g = build_grid(tiers, r_c, 25.0).unwrap();
            let cap = 1 + 3 * q as usize * (q as usize + 1);
            for j in g.cell_ids() {
                let nj = neighbor_set(&g, j, q).unwrap();
                prop_assert!(nj.contains(&j));
                prop_assert!(nj.len() <= cap);
                for &i in &nj {
                    let ni = neighbor_set(&g, i, q).unwrap();
                    prop_assert!(ni.contains(&j));
                }
            }
        }

        #[test]
        fn rho_in_open_unit_interval(
            h_b in 0f64..100.0,
            dh in 1f64..500.0,
            r_c in 50f64..2000.0,
        ) {
            let b = worst_case_ratio(h_b + dh, h_b, r_c).unwrap();
            prop_assert!(b.rho > 0.0 && b.rho < 1.0);
            prop_assert!(b.xi_m > r_c);
        }
    }
}
