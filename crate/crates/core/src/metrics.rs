//! Evaluation quantities: per-RB and sum achievable rates and the
//! worst-case uplink interference power.

use serde::{Deserialize, Serialize};

use crate::allocation::{downlink_interference, Allocation, Direction};
use crate::channel::LinkGains;
use crate::error::{Result, SimError};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerRbMetric {
    pub rb: usize,
    pub rate_bps_hz: f64,
    pub interference_w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkMetrics {
    pub sum_rate_bps_hz: f64,
    pub per_rb: Vec<PerRbMetric>,
}

fn expect_direction(alloc: &Allocation, want: Direction) -> Result<()> {
    if alloc.direction != want {
        return Err(SimError::InvalidParameter(format!(
            "allocation direction mismatch: expected {want:?}"
        )));
    }
    Ok(())
}

/// Downlink rate per RB: log2(1 + P*F_ju / (sigma^2 + I_DL)), summed over
/// the allocation. I_DL is recomputed from the snapshot with the same
/// routine the sensing measurement uses.
pub fn downlink_rate(
    alloc: &Allocation,
    gains: &LinkGains,
    sigma2: f64,
    scenario: &Scenario,
    p_dl: f64,
) -> Result<LinkMetrics> {
    expect_direction(alloc, Direction::Downlink)?;
    let ju = scenario.serving_bs;
    let mut per_rb = Vec::with_capacity(alloc.rbs.len());
    let mut sum = 0.0;
    for &n in &alloc.rbs {
        let i_dl = downlink_interference(scenario, gains, n, p_dl);
        let snr = alloc.power_w[&n] * gains.f_at(ju, n) / (sigma2 + i_dl);
        let rate = (1.0 + snr).log2();
        sum += rate;
        per_rb.push(PerRbMetric {
            rb: n,
            rate_bps_hz: rate,
            interference_w: i_dl,
        });
    }
    Ok(LinkMetrics {
        sum_rate_bps_hz: sum,
        per_rb,
    })
}

/// Uplink rate per RB: log2(1 + p*G_ju / sigma^2); terrestrial ICI at the
/// serving BS is below the noise floor and excluded.
pub fn uplink_rate(
    alloc: &Allocation,
    gains: &LinkGains,
    sigma2: f64,
    scenario: &Scenario,
) -> Result<LinkMetrics> {
    expect_direction(alloc, Direction::Uplink)?;
    let ju = scenario.serving_bs;
    let mut per_rb = Vec::with_capacity(alloc.rbs.len());
    let mut sum = 0.0;
    for &n in &alloc.rbs {
        let snr = alloc.power_w[&n] * gains.g_at(ju, n) / sigma2;
        let rate = (1.0 + snr).log2();
        sum += rate;
        per_rb.push(PerRbMetric {
            rb: n,
            rate_bps_hz: rate,
            interference_w: 0.0,
        });
    }
    Ok(LinkMetrics {
        sum_rate_bps_hz: sum,
        per_rb,
    })
}

/// Worst-case interference the UAV imposes on any co-channel BS:
/// max over assigned RBs and their occupants of p(n) * G_j(n).
/// Zero when no assigned RB is occupied.
pub fn uplink_worst_interference(
    alloc: &Allocation,
    gains: &LinkGains,
    scenario: &Scenario,
) -> Result<f64> {
    expect_direction(alloc, Direction::Uplink)?;
    let mut worst = 0.0f64;
    for &n in &alloc.rbs {
        for &j in scenario.occupants(n) {
            worst = worst.max(alloc.power_w[&n] * gains.g_at(j, n));
        }
    }
    Ok(worst)
}
