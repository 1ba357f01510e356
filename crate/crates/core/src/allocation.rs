//! The six ICIC schemes: conventional downlink/uplink, sensing-assisted
//! downlink/uplink (the latter with worst-case robust power control), and
//! the perfect-CSI optimal oracles.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::channel::LinkGains;
use crate::error::{Result, SimError};
use crate::geometry::RhoBound;
use crate::scenario::{available_rbs, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Downlink,
    Uplink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Conventional,
    Sensing,
    Optimal,
}

/// RB set plus per-RB transmit power for one link direction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Allocation {
    pub direction: Direction,
    pub rbs: Vec<usize>,
    pub power_w: BTreeMap<usize, f64>,
    pub scheme: Scheme,
}

/// Candidate RBs handed to the UAV plus its per-RB sensed powers
/// (I_DL for downlink, E_UL for uplink), linear watts.
#[derive(Debug, Clone)]
pub struct SensingReport {
    pub candidate_rbs: Vec<usize>,
    pub measured_w: BTreeMap<usize, f64>,
}

/// Aggregate downlink interference at the UAV in one RB: every occupied BS
/// transmits at the peak per-RB power.
pub fn downlink_interference(
    scenario: &Scenario,
    gains: &LinkGains,
    rb: usize,
    p_dl: f64,
) -> f64 {
    scenario
        .occupants(rb)
        .iter()
        .map(|&i| p_dl * gains.f_at(i, rb))
        .sum()
}

/// Aggregate UE-transmission power sensed by the UAV in one RB: every
/// active terrestrial UE transmits at the peak uplink power.
pub fn uplink_activity(scenario: &Scenario, gains: &LinkGains, rb: usize, p_ul: f64) -> f64 {
    scenario
        .occupants(rb)
        .iter()
        .map(|&j| p_ul * gains.sensing[&(j, rb)])
        .sum()
}

pub fn measure_downlink_interference(
    scenario: &Scenario,
    gains: &LinkGains,
    rbs: &[usize],
    p_dl: f64,
) -> SensingReport {
    SensingReport {
        candidate_rbs: rbs.to_vec(),
        measured_w: rbs
            .iter()
            .map(|&n| (n, downlink_interference(scenario, gains, n, p_dl)))
            .collect(),
    }
}

pub fn measure_uplink_activity(
    scenario: &Scenario,
    gains: &LinkGains,
    rbs: &[usize],
    p_ul: f64,
) -> SensingReport {
    SensingReport {
        candidate_rbs: rbs.to_vec(),
        measured_w: rbs
            .iter()
            .map(|&n| (n, uplink_activity(scenario, gains, n, p_ul)))
            .collect(),
    }
}

fn omega_for(scenario: &Scenario) -> Result<Vec<usize>> {
    Ok(available_rbs(scenario, scenario.serving_bs)?
        .into_iter()
        .collect())
}

fn require(omega_len: usize, needed: usize) -> Result<()> {
    if omega_len < needed {
        return Err(SimError::InsufficientRbs {
            needed,
            available: omega_len,
        });
    }
    Ok(())
}

/// Uniform without-replacement draw of `count` RBs from `pool`.
pub fn draw_rbs<R: Rng + ?Sized>(pool: &[usize], count: usize, rng: &mut R) -> Vec<usize> {
    sample(rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect()
}

/// Take the `count` RBs with the lowest measured power; ties go to the
/// lowest RB index.
fn lowest_measured(report: &SensingReport, count: usize) -> Vec<usize> {
    let mut ranked: Vec<usize> = report.candidate_rbs.clone();
    ranked.sort_by(|&a, &b| {
        report.measured_w[&a]
            .partial_cmp(&report.measured_w[&b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut chosen: Vec<usize> = ranked.into_iter().take(count).collect();
    chosen.sort_unstable();
    chosen
}

pub fn conventional_downlink<R: Rng + ?Sized>(
    scenario: &Scenario,
    n_d: usize,
    p_dl: f64,
    rng: &mut R,
) -> Result<Allocation> {
    let omega = omega_for(scenario)?;
    require(omega.len(), n_d)?;
    let mut rbs = draw_rbs(&omega, n_d, rng);
    rbs.sort_unstable();
    Ok(Allocation {
        direction: Direction::Downlink,
        power_w: rbs.iter().map(|&n| (n, p_dl)).collect(),
        rbs,
        scheme: Scheme::Conventional,
    })
}

pub fn conventional_uplink<R: Rng + ?Sized>(
    scenario: &Scenario,
    n_u: usize,
    p_ul: f64,
    rng: &mut R,
) -> Result<Allocation> {
    let omega = omega_for(scenario)?;
    require(omega.len(), n_u)?;
    let mut rbs = draw_rbs(&omega, n_u, rng);
    rbs.sort_unstable();
    Ok(Allocation {
        direction: Direction::Uplink,
        power_w: rbs.iter().map(|&n| (n, p_ul)).collect(),
        rbs,
        scheme: Scheme::Conventional,
    })
}

/// Draw the candidate set for a sensing scheme: `m` RBs from Omega,
/// clamped to |Omega| when the request exceeds it.
pub fn draw_candidates<R: Rng + ?Sized>(
    scenario: &Scenario,
    m: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let omega = omega_for(scenario)?;
    require(omega.len(), n)?;
    let m = m.min(omega.len());
    Ok(draw_rbs(&omega, m, rng))
}

pub fn sensing_downlink<R: Rng + ?Sized>(
    scenario: &Scenario,
    gains: &LinkGains,
    m_d: usize,
    n_d: usize,
    p_dl: f64,
    rng: &mut R,
) -> Result<Allocation> {
    let candidates = draw_candidates(scenario, m_d, n_d, rng)?;
    sensing_downlink_with_candidates(scenario, gains, &candidates, n_d, p_dl)
}

pub fn sensing_downlink_with_candidates(
    scenario: &Scenario,
    gains: &LinkGains,
    candidates: &[usize],
    n_d: usize,
    p_dl: f64,
) -> Result<Allocation> {
    require(candidates.len(), n_d)?;
    let report = measure_downlink_interference(scenario, gains, candidates, p_dl);
    let rbs = lowest_measured(&report, n_d);
    Ok(Allocation {
        direction: Direction::Downlink,
        power_w: rbs.iter().map(|&n| (n, p_dl)).collect(),
        rbs,
        scheme: Scheme::Sensing,
    })
}

/// Robust per-RB uplink power: min{1, Gamma_u * rho^alpha / E_UL(n)} * P_UL.
/// An unoccupied RB (E_UL = 0) carries peak power.
pub fn robust_uplink_power(
    e_ul_w: f64,
    p_ul: f64,
    gamma_u: f64,
    rho_bound: &RhoBound,
    alpha_los: f64,
) -> f64 {
    if e_ul_w <= 0.0 {
        return p_ul;
    }
    let scale = gamma_u * rho_bound.rho.powf(alpha_los) / e_ul_w;
    scale.min(1.0) * p_ul
}

#[allow(clippy::too_many_arguments)]
pub fn sensing_uplink<R: Rng + ?Sized>(
    scenario: &Scenario,
    gains: &LinkGains,
    m_u: usize,
    n_u: usize,
    p_ul: f64,
    gamma_u: f64,
    rho_bound: &RhoBound,
    alpha_los: f64,
    rng: &mut R,
) -> Result<Allocation> {
    let candidates = draw_candidates(scenario, m_u, n_u, rng)?;
    sensing_uplink_with_candidates(
        scenario, gains, &candidates, n_u, p_ul, gamma_u, rho_bound, alpha_los,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn sensing_uplink_with_candidates(
    scenario: &Scenario,
    gains: &LinkGains,
    candidates: &[usize],
    n_u: usize,
    p_ul: f64,
    gamma_u: f64,
    rho_bound: &RhoBound,
    alpha_los: f64,
) -> Result<Allocation> {
    require(candidates.len(), n_u)?;
    let report = measure_uplink_activity(scenario, gains, candidates, p_ul);
    let rbs = lowest_measured(&report, n_u);
    let power_w = rbs
        .iter()
        .map(|&n| {
            (
                n,
                robust_uplink_power(report.measured_w[&n], p_ul, gamma_u, rho_bound, alpha_los),
            )
        })
        .collect();
    Ok(Allocation {
        direction: Direction::Uplink,
        rbs,
        power_w,
        scheme: Scheme::Sensing,
    })
}

pub fn optimal_downlink(
    scenario: &Scenario,
    gains: &LinkGains,
    n_d: usize,
    p_dl: f64,
    sigma2: f64,
) -> Result<Allocation> {
    let omega = omega_for(scenario)?;
    require(omega.len(), n_d)?;
    let ju = scenario.serving_bs;
    let mut ranked = omega;
    // largest F_ju(n) / (sigma^2 + I_DL(n)) first, ties by lowest index
    ranked.sort_by(|&a, &b| {
        let ma = gains.f_at(ju, a) / (sigma2 + downlink_interference(scenario, gains, a, p_dl));
        let mb = gains.f_at(ju, b) / (sigma2 + downlink_interference(scenario, gains, b, p_dl));
        mb.partial_cmp(&ma).unwrap().then(a.cmp(&b))
    });
    let mut rbs: Vec<usize> = ranked.into_iter().take(n_d).collect();
    rbs.sort_unstable();
    Ok(Allocation {
        direction: Direction::Downlink,
        power_w: rbs.iter().map(|&n| (n, p_dl)).collect(),
        rbs,
        scheme: Scheme::Optimal,
    })
}

/// Perfect-CSI per-RB uplink power: min{Gamma_u / max_j G_j(n), P_UL},
/// with peak power on unoccupied RBs.
pub fn optimal_uplink_power(
    scenario: &Scenario,
    gains: &LinkGains,
    rb: usize,
    p_ul: f64,
    gamma_u: f64,
) -> f64 {
    let max_g = scenario
        .occupants(rb)
        .iter()
        .map(|&j| gains.g_at(j, rb))
        .fold(0.0f64, f64::max);
    if max_g <= 0.0 {
        return p_ul;
    }
    (gamma_u / max_g).min(p_ul)
}

pub fn optimal_uplink(
    scenario: &Scenario,
    gains: &LinkGains,
    n_u: usize,
    p_ul: f64,
    gamma_u: f64,
) -> Result<Allocation> {
    let omega = omega_for(scenario)?;
    require(omega.len(), n_u)?;
    let ju = scenario.serving_bs;
    let mut ranked = omega;
    // largest p*(n) * G_ju(n) first, ties by lowest index
    ranked.sort_by(|&a, &b| {
        let ma = optimal_uplink_power(scenario, gains, a, p_ul, gamma_u) * gains.g_at(ju, a);
        let mb = optimal_uplink_power(scenario, gains, b, p_ul, gamma_u) * gains.g_at(ju, b);
        mb.partial_cmp(&ma).unwrap().then(a.cmp(&b))
    });
    let mut rbs: Vec<usize> = ranked.into_iter().take(n_u).collect();
    rbs.sort_unstable();
    let power_w = rbs
        .iter()
        .map(|&n| (n, optimal_uplink_power(scenario, gains, n, p_ul, gamma_u)))
        .collect();
    Ok(Allocation {
        direction: Direction::Uplink,
        rbs,
        power_w,
        scheme: Scheme::Optimal,
    })
}

/// Same RB set as a given allocation, but with the perfect-CSI power rule.
/// Used to compare the robust and perfect-CSI power control on identical
/// sensing-selected RBs.
pub fn with_perfect_csi_power(
    scenario: &Scenario,
    gains: &LinkGains,
    alloc: &Allocation,
    p_ul: f64,
    gamma_u: f64,
) -> Allocation {
    Allocation {
        direction: Direction::Uplink,
        rbs: alloc.rbs.clone(),
        power_w: alloc
            .rbs
            .iter()
            .map(|&n| (n, optimal_uplink_power(scenario, gains, n, p_ul, gamma_u)))
            .collect(),
        scheme: Scheme::Optimal,
    }
}
