//! Single-carrier TDMA benchmarks.
//!
//! Both schemes serve one user at a time over the full band and split the
//! slot with max-min optimal time shares. The single-PA scheme radiates from
//! one aperture at the center of the room and sees no ISI. The SC-FDE scheme
//! uses all `N` apertures and an MMSE frequency-domain equalizer, whose
//! effective SNR is evaluated in closed form on the OFDMA tone grid.

use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelGrid, ChannelRealization};
use crate::frame::FrameDesign;
use crate::geometry::{self, Point3, Scenario};
use crate::Result;

/// Max-min time shares for TDMA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeShares {
    pub zeta: Vec<f64>,
    pub min_rate: f64,
}

/// Full-band rate of a user served alone by the center aperture,
/// `B log2(1 + α |h|² P_t / (N_0 B))`.
pub fn standalone_rate_single_pa(user: &Point3, center_pa: &Point3, clear: bool, scenario: &Scenario) -> Result<f64> {
    let alpha = if clear { 1.0 } else { 0.0 };
    let h = channel::link_gain(user, center_pa, alpha, scenario.carrier_hz)?;
    let snr = h.norm_sqr() * scenario.tx_power_w / scenario.noise_power_w;
    Ok(scenario.bandwidth_hz * (1.0 + snr).log2())
}

/// Time shares that equalize `ζ_m r_m`. Any zero rate forces the minimum
/// to zero, with uniform shares as the fallback.
pub fn maxmin_time_shares(standalone: &[f64]) -> TimeShares {
    let users = standalone.len();
    if users == 0 {
        return TimeShares { zeta: vec![], min_rate: 0.0 };
    }
    if standalone.iter().any(|r| !(*r > 0.0)) {
        return TimeShares { zeta: vec![1.0 / users as f64; users], min_rate: 0.0 };
    }
    let inverse_sum: f64 = standalone.iter().map(|r| 1.0 / r).sum();
    TimeShares {
        zeta: standalone.iter().map(|r| (1.0 / r) / inverse_sum).collect(),
        min_rate: 1.0 / inverse_sum,
    }
}

/// MMSE SC-FDE effective SNR `K / Σ_k 1/(γ_k + 1) - 1`.
///
/// Evaluated as `Σ γ/(γ+1) / Σ 1/(γ+1)`, which avoids cancellation at low SNR.
pub fn sc_fde_effective_snr(gammas: &[f64]) -> f64 {
    let harmonic: f64 = gammas.iter().map(|g| 1.0 / (g + 1.0)).sum();
    let excess: f64 = gammas.iter().map(|g| g / (g + 1.0)).sum();
    if harmonic > 0.0 {
        excess / harmonic
    } else {
        0.0
    }
}

/// Per-tone SNRs `γ_k = |H_{m,k}|² P_t / (N K N_0 Δf)` for one user.
pub fn sc_fde_tone_snrs(row: &[num_complex::Complex64], frame: &FrameDesign, scenario: &Scenario) -> Vec<f64> {
    let denom = scenario.pa_count as f64 * frame.subcarriers as f64 * scenario.noise_psd() * frame.subcarrier_spacing;
    row.iter().map(|h| h.norm_sqr() * scenario.tx_power_w / denom).collect()
}

/// Full-band SC-FDE rate `η_cp B log2(1 + SNR_eff)` of a user served alone.
pub fn sc_fde_standalone_rate(row: &[num_complex::Complex64], frame: &FrameDesign, scenario: &Scenario) -> f64 {
    let snr = sc_fde_effective_snr(&sc_fde_tone_snrs(row, frame, scenario));
    frame.cp_efficiency * scenario.bandwidth_hz * (1.0 + snr).log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineRates {
    pub single_pa: f64,
    pub sc_fde: f64,
}

/// Standalone rate of every user under the single-PA scheme.
pub fn single_pa_standalone_rates(users: &[Point3], center_los: &[bool], scenario: &Scenario) -> Result<Vec<f64>> {
    let center = geometry::center_pa_position(scenario);
    users
        .iter()
        .zip(center_los)
        .map(|(u, clear)| standalone_rate_single_pa(u, &center, *clear, scenario))
        .collect()
}

/// Max-min rates of both benchmarks for one drop. `center_los[m]` is the
/// LoS state between user `m` and the center aperture.
pub fn baseline_min_rates(
    realization: &ChannelRealization,
    grid: &ChannelGrid,
    frame: &FrameDesign,
    scenario: &Scenario,
    center_los: &[bool],
) -> Result<BaselineRates> {
    let single = single_pa_standalone_rates(&realization.users, center_los, scenario)?;
    let sc_fde: Vec<f64> = grid
        .response
        .iter()
        .map(|row| sc_fde_standalone_rate(row, frame, scenario))
        .collect();
    Ok(BaselineRates {
        single_pa: maxmin_time_shares(&single).min_rate,
        sc_fde: maxmin_time_shares(&sc_fde).min_rate,
    })
}
