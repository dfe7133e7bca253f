use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{Scenario, ScenarioParams};
use crate::units::dbm_to_watts;
use crate::{Error, Result};

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Number of apertures `N`.
    PaCount,
    /// Total transmit power in dBm.
    TxPower,
}

impl SweepAxis {
    /// Column value written to the `axis_name` CSV field.
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::PaCount => "pa_count",
            SweepAxis::TxPower => "tx_power_dbm",
        }
    }
}

/// Sweep description. Loaded from a flat TOML table; unknown keys are rejected.
///
/// ```toml
/// axis = "pa_count"
/// axis_values = [5, 10, 15, 20, 25, 30]
/// user_counts = [2, 4]
/// betas = [0.05, 0.15]
/// tx_power_dbm = 20.0
/// drops = 500
/// master_seed = 1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub room_length_m: f64,
    pub room_width_m: f64,
    pub waveguide_height_m: f64,
    pub carrier_hz: f64,
    pub refractive_index: f64,
    pub noise_power_dbm: f64,
    pub bandwidth_hz: f64,
    /// Transmit power for points of a `pa_count` sweep.
    pub tx_power_dbm: f64,
    /// Aperture count for points of a `tx_power` sweep.
    pub pa_count: usize,
    pub axis: SweepAxis,
    pub axis_values: Vec<f64>,
    pub user_counts: Vec<usize>,
    pub betas: Vec<f64>,
    pub drops: usize,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            room_length_m: 30.0,
            room_width_m: 10.0,
            waveguide_height_m: 3.0,
            carrier_hz: 28e9,
            refractive_index: 1.4,
            noise_power_dbm: -90.0,
            bandwidth_hz: 500e6,
            tx_power_dbm: 20.0,
            pa_count: 10,
            axis: SweepAxis::PaCount,
            axis_values: vec![2.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            user_counts: vec![2, 4],
            betas: vec![0.05, 0.15],
            drops: 500,
            master_seed: 1,
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub users: usize,
    pub beta: f64,
    pub axis_value: f64,
}

impl ExperimentConfig {
    /// Default power sweep: `N = 10`, 0 to 20 dBm in 5 dB steps.
    pub fn power_sweep() -> Self {
        Self {
            axis: SweepAxis::TxPower,
            axis_values: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let config = Self::from_toml_str(&text).map_err(|source| Error::ConfigParse { path: path.to_path_buf(), source })?;
        config.validate()?;
        Ok(config)
    }

    /// Grid points in output order: users, then beta, then axis value.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut points = Vec::new();
        for &users in &self.user_counts {
            for &beta in &self.betas {
                for &axis_value in &self.axis_values {
                    points.push(SweepPoint { users, beta, axis_value });
                }
            }
        }
        points
    }

    pub fn scenario(&self, point: &SweepPoint) -> Result<Scenario> {
        let (pa_count, tx_power_dbm) = match self.axis {
            SweepAxis::PaCount => (point.axis_value as usize, self.tx_power_dbm),
            SweepAxis::TxPower => (self.pa_count, point.axis_value),
        };
        Scenario::new(ScenarioParams {
            room_length: self.room_length_m,
            room_width: self.room_width_m,
            waveguide_height: self.waveguide_height_m,
            pa_count,
            user_count: point.users,
            carrier_hz: self.carrier_hz,
            refractive_index: self.refractive_index,
            blockage_beta: point.beta,
            bandwidth_hz: self.bandwidth_hz,
            tx_power_w: dbm_to_watts(tx_power_dbm),
            noise_power_w: dbm_to_watts(self.noise_power_dbm),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.drops == 0 {
            return Err(Error::Config("drops must be at least 1".into()));
        }
        if self.axis_values.is_empty() {
            return Err(Error::Config("axis_values must not be empty".into()));
        }
        if self.axis_values.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::Config("axis_values must be sorted ascending".into()));
        }
        if self.user_counts.is_empty() || self.betas.is_empty() {
            return Err(Error::Config("user_counts and betas must not be empty".into()));
        }
        if self.axis == SweepAxis::PaCount {
            if let Some(v) = self.axis_values.iter().find(|v| !(v.fract() == 0.0 && **v >= 1.0)) {
                return Err(Error::Config(format!("pa_count axis values must be positive integers, got {v}")));
            }
        }
        for point in self.points() {
            self.scenario(&point)?;
        }
        Ok(())
    }
}
