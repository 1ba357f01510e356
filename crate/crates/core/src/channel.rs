//! Link-gain computation: LoS path loss, BS antenna-array gain, Rician
//! fading, and the composite BS-UAV / UAV-BS / UE-UAV gain tables.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Result, SimError};
use crate::geometry::{CellId, Position3D};
use crate::scenario::Scenario;
use crate::units::{db_to_linear, dbm_to_watts};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelParams {
    /// LoS reference gain at 1 m, in dB.
    pub beta0_db: f64,
    /// LoS path-loss exponent.
    pub alpha_los: f64,
    pub carrier_hz: f64,
    /// Rician factor for air-ground links, in dB.
    pub rician_k_db: f64,
    pub noise_density_dbm_hz: f64,
    pub rb_bandwidth_hz: f64,
    /// Vertical uniform linear array size at each BS.
    pub antenna_elements: u32,
    pub downtilt_deg: f64,
    /// Probability that an air-ground link is LoS. At the default altitude
    /// the 3GPP urban-macro model gives 1; lower-altitude experiments can
    /// override it together with `alpha_nlos`.
    pub los_probability: f64,
    pub alpha_nlos: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            beta0_db: -34.0,
            alpha_los: 2.2,
            carrier_hz: 2.0e9,
            rician_k_db: 20.0,
            noise_density_dbm_hz: -164.0,
            rb_bandwidth_hz: 180e3,
            antenna_elements: 8,
            downtilt_deg: 10.0,
            los_probability: 1.0,
            alpha_nlos: 3.5,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_los <= 0.0 {
            return Err(SimError::InvalidParameter(
                "alpha_los must be positive".into(),
            ));
        }
        if self.rb_bandwidth_hz <= 0.0 {
            return Err(SimError::InvalidParameter(
                "rb_bandwidth_hz must be positive".into(),
            ));
        }
        if self.antenna_elements < 1 {
            return Err(SimError::InvalidParameter(
                "antenna_elements must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.los_probability) {
            return Err(SimError::InvalidParameter(
                "los_probability must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelMode {
    PureLos,
    Faded,
}

/// Per-snapshot gain tables. `f[j][n]` is the BS j -> UAV downlink power
/// gain in RB n; `g` is the uplink direction (reciprocal, so g = f);
/// `sensing` maps each occupied (cell, RB) to the UE -> UAV power gain.
#[derive(Debug, Clone)]
pub struct LinkGains {
    pub f: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    pub sensing: BTreeMap<(CellId, usize), f64>,
}

impl LinkGains {
    pub fn f_at(&self, j: CellId, rb: usize) -> f64 {
        self.f[j.idx()][rb]
    }

    pub fn g_at(&self, j: CellId, rb: usize) -> f64 {
        self.g[j.idx()][rb]
    }
}

/// Receiver noise power over one RB, in watts.
pub fn noise_power(params: &ChannelParams) -> f64 {
    dbm_to_watts(params.noise_density_dbm_hz) * params.rb_bandwidth_hz
}

/// LoS power-law path gain beta0 * d^(-alpha), linear.
pub fn los_pathloss_gain(d_m: f64, params: &ChannelParams) -> Result<f64> {
    if d_m <= 0.0 {
        return Err(SimError::Domain(format!(
            "path-loss distance must be positive, got {d_m}"
        )));
    }
    Ok(db_to_linear(params.beta0_db) * d_m.powf(-params.alpha_los))
}

fn pathloss_gain_exp(d_m: f64, params: &ChannelParams, alpha: f64) -> Result<f64> {
    if d_m <= 0.0 {
        return Err(SimError::Domain(format!(
            "path-loss distance must be positive, got {d_m}"
        )));
    }
    Ok(db_to_linear(params.beta0_db) * d_m.powf(-alpha))
}

/// Directional gain of the vertical uniform linear array at the BS toward
/// `target_pos`. Half-wavelength element spacing, electrical downtilt,
/// isotropic elements, omnidirectional in azimuth. Peaks at A on the
/// steering angle.
pub fn antenna_gain(
    bs_pos: &Position3D,
    target_pos: &Position3D,
    params: &ChannelParams,
) -> Result<f64> {
    let d = bs_pos.distance(target_pos);
    if d == 0.0 {
        return Err(SimError::Domain(
            "antenna gain undefined for coincident positions".into(),
        ));
    }
    // elevation measured positive downward from the BS horizon
    let sin_theta = (bs_pos.z - target_pos.z) / d;
    let sin_tilt = params.downtilt_deg.to_radians().sin();
    Ok(array_factor_gain(
        sin_theta - sin_tilt,
        params.antenna_elements,
    ))
}

/// |sum_m exp(i*pi*m*u)|^2 / A for m = 0..A-1.
pub fn array_factor_gain(u: f64, elements: u32) -> f64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..elements {
        let phase = std::f64::consts::PI * m as f64 * u;
        sum += Complex64::from_polar(1.0, phase);
    }
    sum.norm_sqr() / elements as f64
}

/// One draw of the Rician power factor |h|^2 with unit mean.
pub fn rician_fading_sample<R: Rng + ?Sized>(k_db: f64, rng: &mut R) -> f64 {
    let k = db_to_linear(k_db);
    let los = (k / (k + 1.0)).sqrt();
    let sigma = (1.0 / (2.0 * (k + 1.0))).sqrt();
    let re: f64 = rng.sample::<f64, _>(StandardNormal);
    let im: f64 = rng.sample::<f64, _>(StandardNormal);
    let h_re = los + sigma * re;
    let h_im = sigma * im;
    h_re * h_re + h_im * h_im
}

/// Build the full gain tables for one snapshot.
///
/// Downlink gain F_j(n) composes path loss, array gain, and (in faded mode)
/// one Rician draw per (link, RB). Uplink G_j(n) = F_j(n). Sensing gains
/// use the UE's omnidirectional antenna, so no array factor.
pub fn compute_link_gains<R: Rng + ?Sized>(
    scenario: &Scenario,
    params: &ChannelParams,
    mode: ChannelMode,
    rng: &mut R,
) -> Result<LinkGains> {
    let grid = &scenario.grid;
    let n_rbs = scenario.n_rbs;
    let uav = scenario.uav_pos;

    let mut f = Vec::with_capacity(grid.num_cells());
    for j in grid.cell_ids() {
        let bs = grid.bs_position(j)?;
        let alpha = effective_alpha(params, rng);
        let large_scale =
            pathloss_gain_exp(bs.distance(&uav), params, alpha)? * antenna_gain(&bs, &uav, params)?;
        let mut row = Vec::with_capacity(n_rbs);
        for _ in 0..n_rbs {
            let fading = match mode {
                ChannelMode::PureLos => 1.0,
                ChannelMode::Faded => rician_fading_sample(params.rician_k_db, rng),
            };
            row.push(large_scale * fading);
        }
        f.push(row);
    }

    let mut sensing = BTreeMap::new();
    for ue in &scenario.ues {
        let alpha = effective_alpha(params, rng);
        let large_scale = pathloss_gain_exp(ue.pos.distance(&uav), params, alpha)?;
        let fading = match mode {
            ChannelMode::PureLos => 1.0,
            ChannelMode::Faded => rician_fading_sample(params.rician_k_db, rng),
        };
        sensing.insert((ue.cell, ue.rb), large_scale * fading);
    }

    Ok(LinkGains {
        g: f.clone(),
        f,
        sensing,
    })
}

fn effective_alpha<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> f64 {
    // avoid consuming the stream in the default all-LoS configuration
    if params.los_probability >= 1.0 {
        params.alpha_los
    } else if rng.gen::<f64>() < params.los_probability {
        params.alpha_los
    } else {
        params.alpha_nlos
    }
}
