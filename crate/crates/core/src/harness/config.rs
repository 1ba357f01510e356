//! Experiment configuration and the three figure presets.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelMode, ChannelParams};
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Downlink rate vs BS peak transmit power.
    Fig3a,
    /// Uplink worst-case interference vs threshold, robust vs perfect CSI.
    Fig3b,
    /// Uplink rate/interference tradeoff across schemes.
    Fig3c,
}

impl std::str::FromStr for Preset {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3a" => Ok(Preset::Fig3a),
            "fig3b" => Ok(Preset::Fig3b),
            "fig3c" => Ok(Preset::Fig3c),
            other => Err(SimError::Config(format!("unknown preset '{other}'"))),
        }
    }
}

impl std::str::FromStr for ChannelMode {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure-los" => Ok(ChannelMode::PureLos),
            "faded" => Ok(ChannelMode::Faded),
            other => Err(SimError::Config(format!("unknown mode '{other}'"))),
        }
    }
}

/// Full experiment description. Every default matches the reference
/// simulation setup; config files may override any field by name and
/// unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    // channel
    pub beta0_db: f64,
    pub alpha_los: f64,
    pub carrier_hz: f64,
    pub rician_k_db: f64,
    pub noise_density_dbm_hz: f64,
    pub rb_bandwidth_hz: f64,
    pub antenna_elements: u32,
    pub downtilt_deg: f64,
    pub los_probability: f64,
    pub alpha_nlos: f64,
    // geometry
    pub tiers: u32,
    pub cell_radius_m: f64,
    pub bs_height_m: f64,
    pub uav_altitude_m: f64,
    // scenario
    pub n_rbs: usize,
    pub n_ues: usize,
    pub q: u32,
    pub enforce_terrestrial_icic: bool,
    // demands and powers
    pub n_dl_rbs: usize,
    pub n_ul_rbs: usize,
    pub p_dl_dbm: Vec<f64>,
    pub p_ul_dbm: f64,
    pub gamma_u_dbm: Vec<f64>,
    pub m_d: Vec<usize>,
    pub m_u: Vec<usize>,
    // run control
    pub realizations: u64,
    pub master_seed: u64,
    pub mode: ChannelMode,
    pub preset: Preset,
}

impl Default for ExperimentConfig {
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
            tiers: 3,
            cell_radius_m: 800.0,
            bs_height_m: 25.0,
            uav_altitude_m: 200.0,
            n_rbs: 30,
            n_ues: 60,
            q: 1,
            enforce_terrestrial_icic: true,
            n_dl_rbs: 1,
            n_ul_rbs: 10,
            p_dl_dbm: (0..=8).map(|i| 30.0 + 2.0 * i as f64).collect(),
            p_ul_dbm: 10.0,
            gamma_u_dbm: (0..=10).map(|i| -120.0 + 5.0 * i as f64).collect(),
            m_d: vec![5, 10, 15],
            m_u: vec![12, 20],
            realizations: 1000,
            master_seed: 1,
            mode: ChannelMode::PureLos,
            preset: Preset::Fig3a,
        }
    }
}

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        let mut cfg = Self {
            preset,
            ..Self::default()
        };
        if preset == Preset::Fig3b {
            cfg.m_u = vec![12];
        }
        cfg
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn channel_params(&self) -> ChannelParams {
        ChannelParams {
            beta0_db: self.beta0_db,
            alpha_los: self.alpha_los,
            carrier_hz: self.carrier_hz,
            rician_k_db: self.rician_k_db,
            noise_density_dbm_hz: self.noise_density_dbm_hz,
            rb_bandwidth_hz: self.rb_bandwidth_hz,
            antenna_elements: self.antenna_elements,
            downtilt_deg: self.downtilt_deg,
            los_probability: self.los_probability,
            alpha_nlos: self.alpha_nlos,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.channel_params().validate()?;
        if self.realizations < 1 {
            return Err(SimError::Config("realizations must be at least 1".into()));
        }
        if self.n_rbs == 0 {
            return Err(SimError::Config("n_rbs must be positive".into()));
        }
        if self.cell_radius_m <= 0.0 {
            return Err(SimError::Config("cell_radius_m must be positive".into()));
        }
        if self.uav_altitude_m <= self.bs_height_m {
            return Err(SimError::Config(
                "uav_altitude_m must exceed bs_height_m".into(),
            ));
        }
        if self.p_dl_dbm.is_empty() || self.gamma_u_dbm.is_empty() {
            return Err(SimError::Config("sweep lists must be non-empty".into()));
        }
        if self.m_d.is_empty() || self.m_u.is_empty() {
            return Err(SimError::Config("candidate-count lists must be non-empty".into()));
        }
        if self.n_dl_rbs == 0 || self.n_ul_rbs == 0 {
            return Err(SimError::Config("requested RB counts must be positive".into()));
        }
        if self.m_d.iter().any(|&m| m <= self.n_dl_rbs) {
            return Err(SimError::Config(
                "every m_d must exceed n_dl_rbs".into(),
            ));
        }
        if self.m_u.iter().any(|&m| m <= self.n_ul_rbs) {
            return Err(SimError::Config(
                "every m_u must exceed n_ul_rbs".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ExperimentConfig::default().validate().unwrap();
        ExperimentConfig::preset(Preset::Fig3b).validate().unwrap();
    }

    #[test]
    fn default_sweeps() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.p_dl_dbm.first(), Some(&30.0));
        assert_eq!(cfg.p_dl_dbm.last(), Some(&46.0));
        assert_eq!(cfg.gamma_u_dbm.first(), Some(&-120.0));
        assert_eq!(cfg.gamma_u_dbm.last(), Some(&-70.0));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::from_json_str(r#"{"no_such_key": 1}"#).unwrap_err();
        assert!(matches!(err, SimError::Json(_)));
    }

    #[test]
    fn overrides_applied() {
        let cfg =
            ExperimentConfig::from_json_str(r#"{"realizations": 5, "preset": "fig3c"}"#).unwrap();
        assert_eq!(cfg.realizations, 5);
        assert_eq!(cfg.preset, Preset::Fig3c);
        assert_eq!(cfg.n_ues, 60);
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(ExperimentConfig::from_json_str(r#"{"realizations": 0}"#).is_err());
        assert!(ExperimentConfig::from_json_str(r#"{"uav_altitude_m": 10.0}"#).is_err());
        assert!(ExperimentConfig::from_json_str(r#"{"m_d": []}"#).is_err());
        assert!(ExperimentConfig::from_json_str(r#"{"m_u": [10]}"#).is_err());
    }
}
