//! Classical water-filling over parallel Gaussian subchannels.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaterFilling {
    /// Power per entry of the input gain list (W).
    pub power: Vec<f64>,
    /// Water level `μ`; `None` when no power was poured.
    pub water_level: Option<f64>,
    /// Set when a positive budget met only zero gains and went unused.
    pub unusable: bool,
}

impl WaterFilling {
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum()
    }
}

/// Maximizes `Σ log2(1 + g_k p_k)` subject to `Σ p_k = budget`, `p_k >= 0`.
///
/// `gains` are per-watt SNR slopes. The water level is found exactly by
/// sorting the floor heights `1/g_k` and taking the largest prefix whose
/// common level stays above its highest floor.
pub fn waterfill(gains: &[f64], budget: f64) -> WaterFilling {
    let mut floors: Vec<(f64, usize)> = gains
        .iter()
        .enumerate()
        .filter(|(_, g)| **g > 0.0)
        .map(|(k, g)| (1.0 / g, k))
        .collect();
    let mut power = vec![0.0; gains.len()];

    if floors.is_empty() {
        return WaterFilling { power, water_level: None, unusable: budget > 0.0 };
    }
    if !(budget > 0.0) {
        return WaterFilling { power, water_level: None, unusable: false };
    }

    floors.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut prefix = 0.0;
    let mut level = 0.0;
    let mut active = 0;
    for (j, (floor, _)) in floors.iter().enumerate() {
        let candidate = (budget + prefix + floor) / (j + 1) as f64;
        if candidate <= *floor {
            break;
        }
        prefix += floor;
        level = candidate;
        active = j + 1;
    }

    for (floor, k) in &floors[..active] {
        power[*k] = level - floor;
    }
    WaterFilling { power, water_level: Some(level), unusable: false }
}

/// `Σ log2(1 + g_k p_k)`.
pub fn spectral_sum(gains: &[f64], power: &[f64]) -> f64 {
    gains.iter().zip(power).map(|(g, p)| (g * p).ln_1p()).sum::<f64>() / std::f64::consts::LN_2
}
