//! Monte Carlo experiment runner: seeded realization loop, paired scheme
//! comparison on identical snapshots, and aggregation over realizations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{
    conventional_downlink, conventional_uplink, optimal_downlink, optimal_uplink,
    sensing_downlink, sensing_uplink, with_perfect_csi_power, Allocation,
};
use crate::channel::{compute_link_gains, noise_power, LinkGains};
use crate::error::{Result, SimError};
use crate::geometry::{build_grid, worst_case_ratio, HexGrid, RhoBound};
use crate::metrics::{downlink_rate, uplink_rate, uplink_worst_interference};
use crate::scenario::{generate_scenario, Scenario};
use crate::units::{dbm_to_watts, watts_to_dbm};

use super::config::{ExperimentConfig, Preset};
use super::rng::substream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeKind {
    ConventionalDl,
    SensingDl { m: usize },
    OptimalDl,
    ConventionalUl,
    SensingUl { m: usize },
    /// Sensing RB selection, but powered by the perfect-CSI rule; the
    /// comparison arm for the robust power control.
    SensingUlPerfectCsi { m: usize },
    OptimalUl,
}

impl SchemeKind {
    pub fn label(&self) -> String {
        match self {
            SchemeKind::ConventionalDl | SchemeKind::ConventionalUl => "conventional".into(),
            SchemeKind::SensingDl { m } | SchemeKind::SensingUl { m } => format!("sensing_m{m}"),
            SchemeKind::SensingUlPerfectCsi { m } => format!("sensing_m{m}_perfect_csi"),
            SchemeKind::OptimalDl | SchemeKind::OptimalUl => "optimal".into(),
        }
    }

    /// Substream purpose; the robust and perfect-CSI arms share one stream
    /// so they sense the identical candidate set.
    fn rng_purpose(&self) -> String {
        match self {
            SchemeKind::ConventionalDl => "conventional_dl".into(),
            SchemeKind::ConventionalUl => "conventional_ul".into(),
            SchemeKind::SensingDl { m } => format!("sensing_dl_m{m}"),
            SchemeKind::SensingUl { m } | SchemeKind::SensingUlPerfectCsi { m } => {
                format!("sensing_ul_m{m}")
            }
            SchemeKind::OptimalDl => "optimal_dl".into(),
            SchemeKind::OptimalUl => "optimal_ul".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub sweep_name: &'static str,
    pub sweep_dbm: Vec<f64>,
    pub schemes: Vec<SchemeKind>,
}

pub fn plan(config: &ExperimentConfig) -> ExperimentPlan {
    match config.preset {
        Preset::Fig3a => {
            let mut schemes = vec![SchemeKind::ConventionalDl];
            schemes.extend(config.m_d.iter().map(|&m| SchemeKind::SensingDl { m }));
            schemes.push(SchemeKind::OptimalDl);
            ExperimentPlan {
                sweep_name: "p_dl_dbm",
                sweep_dbm: config.p_dl_dbm.clone(),
                schemes,
            }
        }
        Preset::Fig3b => {
            let mut schemes = Vec::new();
            for &m in &config.m_u {
                schemes.push(SchemeKind::SensingUl { m });
                schemes.push(SchemeKind::SensingUlPerfectCsi { m });
            }
            ExperimentPlan {
                sweep_name: "gamma_u_dbm",
                sweep_dbm: config.gamma_u_dbm.clone(),
                schemes,
            }
        }
        Preset::Fig3c => {
            let mut schemes = vec![SchemeKind::ConventionalUl];
            schemes.extend(config.m_u.iter().map(|&m| SchemeKind::SensingUl { m }));
            schemes.push(SchemeKind::OptimalUl);
            ExperimentPlan {
                sweep_name: "gamma_u_dbm",
                sweep_dbm: config.gamma_u_dbm.clone(),
                schemes,
            }
        }
    }
}

/// One scheme's outcome at one sweep point in one realization.
#[derive(Debug, Clone, Copy)]
pub struct SchemeMetrics {
    pub rate_bps_hz: f64,
    /// Worst-case uplink interference; absent for downlink schemes.
    pub iul_w: Option<f64>,
}

/// Everything computed for one realization: metrics indexed
/// [sweep point][scheme], plus the snapshot for auditing.
pub struct RealizationOutput {
    pub scenario: Scenario,
    pub gains: LinkGains,
    pub metrics: Vec<Vec<SchemeMetrics>>,
}

/// Build the snapshot for one realization from its substreams.
pub fn realize_snapshot(
    config: &ExperimentConfig,
    grid: &HexGrid,
    index: u64,
) -> Result<(Scenario, LinkGains)> {
    let params = config.channel_params();
    let mut scen_rng = substream(config.master_seed, index, "scenario");
    let scenario = generate_scenario(
        grid,
        config.n_rbs,
        config.n_ues,
        config.q,
        config.uav_altitude_m,
        config.enforce_terrestrial_icic,
        &mut scen_rng,
    )?;
    let mut fade_rng = substream(config.master_seed, index, "fading");
    let gains = compute_link_gains(&scenario, &params, config.mode, &mut fade_rng)?;
    Ok((scenario, gains))
}

fn scheme_allocation(
    kind: &SchemeKind,
    config: &ExperimentConfig,
    scenario: &Scenario,
    gains: &LinkGains,
    rho: &RhoBound,
    sigma2: f64,
    sweep_dbm: f64,
    index: u64,
) -> Result<(Allocation, f64)> {
    let p_ul = dbm_to_watts(config.p_ul_dbm);
    let mut rng = substream(config.master_seed, index, &kind.rng_purpose());
    match kind {
        SchemeKind::ConventionalDl => {
            let p_dl = dbm_to_watts(sweep_dbm);
            Ok((
                conventional_downlink(scenario, config.n_dl_rbs, p_dl, &mut rng)?,
                p_dl,
            ))
        }
        SchemeKind::SensingDl { m } => {
            let p_dl = dbm_to_watts(sweep_dbm);
            Ok((
                sensing_downlink(scenario, gains, *m, config.n_dl_rbs, p_dl, &mut rng)?,
                p_dl,
            ))
        }
        SchemeKind::OptimalDl => {
            let p_dl = dbm_to_watts(sweep_dbm);
            Ok((
                optimal_downlink(scenario, gains, config.n_dl_rbs, p_dl, sigma2)?,
                p_dl,
            ))
        }
        SchemeKind::ConventionalUl => Ok((
            conventional_uplink(scenario, config.n_ul_rbs, p_ul, &mut rng)?,
            p_ul,
        )),
        SchemeKind::SensingUl { m } => {
            let gamma = dbm_to_watts(sweep_dbm);
            Ok((
                sensing_uplink(
                    scenario,
                    gains,
                    *m,
                    config.n_ul_rbs,
                    p_ul,
                    gamma,
                    rho,
                    config.alpha_los,
                    &mut rng,
                )?,
                p_ul,
            ))
        }
        SchemeKind::SensingUlPerfectCsi { m } => {
            let gamma = dbm_to_watts(sweep_dbm);
            let robust = sensing_uplink(
                scenario,
                gains,
                *m,
                config.n_ul_rbs,
                p_ul,
                gamma,
                rho,
                config.alpha_los,
                &mut rng,
            )?;
            Ok((
                with_perfect_csi_power(scenario, gains, &robust, p_ul, gamma),
                p_ul,
            ))
        }
        SchemeKind::OptimalUl => {
            let gamma = dbm_to_watts(sweep_dbm);
            Ok((
                optimal_uplink(scenario, gains, config.n_ul_rbs, p_ul, gamma)?,
                p_ul,
            ))
        }
    }
}

fn is_downlink(kind: &SchemeKind) -> bool {
    matches!(
        kind,
        SchemeKind::ConventionalDl | SchemeKind::SensingDl { .. } | SchemeKind::OptimalDl
    )
}

/// Run every enabled scheme at every sweep point on one snapshot.
pub fn run_realization(
    config: &ExperimentConfig,
    experiment: &ExperimentPlan,
    grid: &HexGrid,
    rho: &RhoBound,
    index: u64,
) -> Result<RealizationOutput> {
    let attach = |e: SimError| SimError::Realization {
        index,
        source: Box::new(e),
    };
    let (scenario, gains) = realize_snapshot(config, grid, index).map_err(attach)?;
    let sigma2 = noise_power(&config.channel_params());

    let mut metrics = Vec::with_capacity(experiment.sweep_dbm.len());
    for &sweep_dbm in &experiment.sweep_dbm {
        let mut row = Vec::with_capacity(experiment.schemes.len());
        for kind in &experiment.schemes {
            let (alloc, p_dl) = scheme_allocation(
                kind, config, &scenario, &gains, rho, sigma2, sweep_dbm, index,
            )
            .map_err(attach)?;
            let m = if is_downlink(kind) {
                SchemeMetrics {
                    rate_bps_hz: downlink_rate(&alloc, &gains, sigma2, &scenario, p_dl)
                        .map_err(attach)?
                        .sum_rate_bps_hz,
                    iul_w: None,
                }
            } else {
                SchemeMetrics {
                    rate_bps_hz: uplink_rate(&alloc, &gains, sigma2, &scenario)
                        .map_err(attach)?
                        .sum_rate_bps_hz,
                    iul_w: Some(
                        uplink_worst_interference(&alloc, &gains, &scenario).map_err(attach)?,
                    ),
                }
            };
            row.push(m);
        }
        metrics.push(row);
    }
    Ok(RealizationOutput {
        scenario,
        gains,
        metrics,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AggregateRow {
    pub scheme: String,
    pub sweep_name: String,
    pub sweep_value: f64,
    pub mean_rate_bps_hz: f64,
    /// Mean over realizations of the worst-case uplink interference,
    /// averaged in linear watts and reported in dBm; absent for downlink.
    pub mean_iul_dbm: Option<f64>,
    pub max_iul_dbm: Option<f64>,
    pub n_realizations: u64,
    pub stderr: f64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<AggregateRow>> {
    config.validate()?;
    let experiment = plan(config);
    let grid = build_grid(config.tiers, config.cell_radius_m, config.bs_height_m)?;
    let rho = worst_case_ratio(config.uav_altitude_m, config.bs_height_m, config.cell_radius_m)?;

    let outputs: Vec<Vec<Vec<SchemeMetrics>>> = (0..config.realizations)
        .into_par_iter()
        .map(|i| run_realization(config, &experiment, &grid, &rho, i).map(|o| o.metrics))
        .collect::<Result<_>>()?;

    let n = config.realizations;
    let mut rows = Vec::new();
    for (k, kind) in experiment.schemes.iter().enumerate() {
        for (s, &sweep_value) in experiment.sweep_dbm.iter().enumerate() {
            let rates: Vec<f64> = outputs.iter().map(|o| o[s][k].rate_bps_hz).collect();
            let mean = rates.iter().sum::<f64>() / n as f64;
            let var = rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>()
                / (n as f64 - 1.0).max(1.0);
            let stderr = (var / n as f64).sqrt();
            let (mean_iul_dbm, max_iul_dbm) = if is_downlink(kind) {
                (None, None)
            } else {
                let iuls: Vec<f64> =
                    outputs.iter().map(|o| o[s][k].iul_w.unwrap()).collect();
                let mean_w = iuls.iter().sum::<f64>() / n as f64;
                let max_w = iuls.iter().cloned().fold(0.0f64, f64::max);
                (Some(watts_to_dbm(mean_w)), Some(watts_to_dbm(max_w)))
            };
            rows.push(AggregateRow {
                scheme: kind.label(),
                sweep_name: experiment.sweep_name.to_string(),
                sweep_value,
                mean_rate_bps_hz: mean,
                mean_iul_dbm,
                max_iul_dbm,
                n_realizations: n,
                stderr,
            });
        }
    }
    Ok(rows)
}

/// Same as `run_experiment` but pinned to a worker count; the output is
/// identical for any count.
pub fn run_experiment_with_threads(
    config: &ExperimentConfig,
    threads: usize,
) -> Result<Vec<AggregateRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    fn small_config(preset: Preset) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::preset(preset);
        cfg.realizations = 20;
        cfg.p_dl_dbm = vec![30.0, 40.0];
        cfg.gamma_u_dbm = vec![-110.0, -90.0];
        cfg
    }

    #[test]
    fn realization_deterministic() {
        let cfg = small_config(Preset::Fig3a);
        let experiment = plan(&cfg);
        let grid = build_grid(cfg.tiers, cfg.cell_radius_m, cfg.bs_height_m).unwrap();
        let rho =
            worst_case_ratio(cfg.uav_altitude_m, cfg.bs_height_m, cfg.cell_radius_m).unwrap();
        let a = run_realization(&cfg, &experiment, &grid, &rho, 3).unwrap();
        let b = run_realization(&cfg, &experiment, &grid, &rho, 3).unwrap();
        for (ra, rb) in a.metrics.iter().flatten().zip(b.metrics.iter().flatten()) {
            assert_eq!(ra.rate_bps_hz.to_bits(), rb.rate_bps_hz.to_bits());
        }
    }

    #[test]
    fn realizations_differ() {
        let cfg = small_config(Preset::Fig3a);
        let grid = build_grid(cfg.tiers, cfg.cell_radius_m, cfg.bs_height_m).unwrap();
        let mut hashes = std::collections::HashSet::new();
        for i in 0..100 {
            let (scenario, _) = realize_snapshot(&cfg, &grid, i).unwrap();
            let mut h = DefaultHasher::new();
            for (n, occ) in scenario.occupancy.iter().enumerate() {
                n.hash(&mut h);
                for c in occ {
                    c.0.hash(&mut h);
                }
            }
            hashes.insert(h.finish());
        }
        assert_eq!(hashes.len(), 100);
    }

    #[test]
    fn aggregates_are_arithmetic_means() {
        let cfg = small_config(Preset::Fig3c);
        let experiment = plan(&cfg);
        let grid = build_grid(cfg.tiers, cfg.cell_radius_m, cfg.bs_height_m).unwrap();
        let rho =
            worst_case_ratio(cfg.uav_altitude_m, cfg.bs_height_m, cfg.cell_radius_m).unwrap();
        let rows = run_experiment(&cfg).unwrap();
        // recompute the mean of scheme 0 at sweep point 0 by hand
        let mut sum = 0.0;
        for i in 0..cfg.realizations {
            let o = run_realization(&cfg, &experiment, &grid, &rho, i).unwrap();
            sum += o.metrics[0][0].rate_bps_hz;
        }
        let row = rows
            .iter()
            .find(|r| r.scheme == experiment.schemes[0].label() && r.sweep_value == -110.0)
            .unwrap();
        let mean = sum / cfg.realizations as f64;
        assert!((row.mean_rate_bps_hz - mean).abs() <= 1e-12 * mean.abs());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = small_config(Preset::Fig3b);
        let r1 = run_experiment_with_threads(&cfg, 1).unwrap();
        let r4 = run_experiment_with_threads(&cfg, 4).unwrap();
        assert_eq!(r1, r4);
    }
}
