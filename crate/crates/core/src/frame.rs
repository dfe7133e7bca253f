//! OFDMA numerology from the delay statistics of one channel draw.
//!
//! The cyclic prefix covers the worst excess delay, the FFT window adds
//! `1 / B_c = 5 σ_τ` on top of it, and the subcarrier count is the next power
//! of two that fits `B · T_FFT`. Blocked taps carry no energy and are left out
//! of every delay statistic.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::geometry::Scenario;

/// Subcarrier count used when the channel has no delay dispersion.
pub const FLAT_CHANNEL_SUBCARRIERS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameDesign {
    /// Cyclic prefix duration `T_CP` (s).
    pub cyclic_prefix: f64,
    /// FFT window `T_FFT` (s).
    pub fft_window: f64,
    /// Number of subcarriers `K`, a power of two.
    pub subcarriers: usize,
    /// Subcarrier spacing `Δf = B / K` (Hz).
    pub subcarrier_spacing: f64,
    /// `T_FFT / (T_FFT + T_CP)`.
    pub cp_efficiency: f64,
    /// Worst excess delay `T_max` of the draw (s).
    pub max_excess_delay: f64,
    /// Worst per-user RMS delay spread `σ_τ` (s).
    pub rms_delay_spread: f64,
    /// `1 / (5 σ_τ)` (Hz); `None` for a flat channel.
    pub coherence_bandwidth: Option<f64>,
}

impl FrameDesign {
    /// Applies the design rules to precomputed delay statistics.
    ///
    /// With `rms_delay_spread == 0` there is no ISI to guard against, so the
    /// prefix is dropped and `K` is pinned to [`FLAT_CHANNEL_SUBCARRIERS`].
    pub fn from_delay_stats(bandwidth_hz: f64, max_excess_delay: f64, rms_delay_spread: f64) -> Self {
        if rms_delay_spread <= 0.0 {
            let mut design = Self::with_subcarriers(bandwidth_hz, FLAT_CHANNEL_SUBCARRIERS, 0.0);
            design.max_excess_delay = max_excess_delay;
            return design;
        }
        let cyclic_prefix = max_excess_delay;
        let inverse_coherence = 5.0 * rms_delay_spread;
        let fft_window = cyclic_prefix + inverse_coherence;
        let subcarriers = next_power_of_two(bandwidth_hz * fft_window);
        Self {
            cyclic_prefix,
            fft_window,
            subcarriers,
            subcarrier_spacing: bandwidth_hz / subcarriers as f64,
            cp_efficiency: fft_window / (fft_window + cyclic_prefix),
            max_excess_delay,
            rms_delay_spread,
            coherence_bandwidth: Some(1.0 / inverse_coherence),
        }
    }

    /// A frame with an explicit subcarrier count and prefix; the FFT window
    /// is the full symbol `K / B`.
    pub fn with_subcarriers(bandwidth_hz: f64, subcarriers: usize, cyclic_prefix: f64) -> Self {
        let fft_window = subcarriers as f64 / bandwidth_hz;
        Self {
            cyclic_prefix,
            fft_window,
            subcarriers,
            subcarrier_spacing: bandwidth_hz / subcarriers as f64,
            cp_efficiency: fft_window / (fft_window + cyclic_prefix),
            max_excess_delay: cyclic_prefix,
            rms_delay_spread: 0.0,
            coherence_bandwidth: None,
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.subcarrier_spacing * self.subcarriers as f64
    }
}

/// Smallest power of two `>= x`, and at least 1.
fn next_power_of_two(x: f64) -> usize {
    if !(x > 1.0) {
        return 1;
    }
    (x.ceil() as usize).next_power_of_two()
}

/// Largest minus smallest delay; 0 for an empty or single-element list.
pub fn excess_delay(delays: &[f64]) -> f64 {
    if delays.is_empty() {
        return 0.0;
    }
    let max = delays.iter().cloned().fold(f64::MIN, f64::max);
    let min = delays.iter().cloned().fold(f64::MAX, f64::min);
    max - min
}

/// Population RMS of `delays` about their mean.
pub fn rms_spread(delays: &[f64]) -> f64 {
    if delays.is_empty() || delays.iter().all(|&d| d == delays[0]) {
        return 0.0;
    }
    let n = delays.len() as f64;
    let mean = delays.iter().sum::<f64>() / n;
    (delays.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n).sqrt()
}

fn per_user_max(realization: &ChannelRealization, stat: fn(&[f64]) -> f64) -> f64 {
    (0..realization.user_count())
        .filter_map(|m| {
            let delays: Vec<f64> = realization.clear_delays(m).collect();
            (!delays.is_empty()).then(|| stat(&delays))
        })
        .fold(0.0, f64::max)
}

/// `T_max = max_m (τ_{m,max} - τ_{m,min})` over unblocked taps.
pub fn max_excess_delay(realization: &ChannelRealization) -> f64 {
    per_user_max(realization, excess_delay)
}

/// `σ_τ = max_m σ_{τ,m}` over unblocked taps.
pub fn rms_delay_spread(realization: &ChannelRealization) -> f64 {
    per_user_max(realization, rms_spread)
}

pub fn design_frame(scenario: &Scenario, realization: &ChannelRealization) -> FrameDesign {
    FrameDesign::from_delay_stats(
        scenario.bandwidth_hz,
        max_excess_delay(realization),
        rms_delay_spread(realization),
    )
}
