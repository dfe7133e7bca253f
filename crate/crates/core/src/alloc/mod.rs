//! Max-min OFDMA resource allocation.
//!
//! The allocator runs in two stages: a greedy pass that hands out
//! subcarriers to the currently worst-served user, then per-user
//! water-filling of an equal `P_t / M` budget across the tones each user
//! received. [`exhaustive_oracle`] enumerates every assignment for small
//! instances under the same power policy.

mod greedy;
mod oracle;
mod waterfill;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelGrid;
use crate::frame::FrameDesign;
use crate::geometry::Scenario;

pub use greedy::greedy_assign_gains;
pub use oracle::{exhaustive_oracle, exhaustive_oracle_gains, OracleResult, ORACLE_MAX_TONES, ORACLE_MAX_USERS};
pub use waterfill::{spectral_sum, waterfill, WaterFilling};

/// Per-watt SNR slopes `g[m][k] = |H_{m,k}|² / (N Δf N_0)` (1/W).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainGrid {
    pub rows: Vec<Vec<f64>>,
}

impl GainGrid {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        Self { rows }
    }

    /// Scales squared channel magnitudes by the per-tone noise and the
    /// uniform spreading of power across the `N` apertures.
    pub fn from_power_gains(power_gains: &[Vec<f64>], frame: &FrameDesign, scenario: &Scenario) -> Self {
        let scale = 1.0 / (scenario.pa_count as f64 * frame.subcarrier_spacing * scenario.noise_psd());
        Self {
            rows: power_gains
                .iter()
                .map(|row| row.iter().map(|h2| h2 * scale).collect())
                .collect(),
        }
    }

    pub fn from_channel(grid: &ChannelGrid, frame: &FrameDesign, scenario: &Scenario) -> Self {
        Self::from_power_gains(&grid.power_gains(), frame, scenario)
    }

    pub fn user_count(&self) -> usize {
        self.rows.len()
    }

    pub fn tone_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Result of the two-stage allocator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    /// Owner of each tone, in grid column order.
    pub owners: Vec<usize>,
    /// `power[m][k]` (W); nonzero only on tones owned by `m`.
    pub power: Vec<Vec<f64>>,
    /// Achievable rate per user (bit/s).
    pub rates: Vec<f64>,
    /// Users whose budget could not be used because all their tones are dead.
    pub unusable_budget: Vec<bool>,
}

impl Allocation {
    /// Binary assignment `b[m][k]`.
    pub fn assignment(&self) -> Vec<Vec<bool>> {
        assignment_matrix(&self.owners, self.rates.len())
    }

    pub fn total_power(&self) -> f64 {
        self.power.iter().flatten().sum()
    }
}

/// Expands a tone-owner list into the `b[m][k]` matrix.
pub fn assignment_matrix(owners: &[usize], users: usize) -> Vec<Vec<bool>> {
    (0..users)
        .map(|m| owners.iter().map(|&o| o == m).collect())
        .collect()
}

/// `η_cp Δf Σ_k b_k log2(1 + g_k p_k)` (bit/s).
pub fn user_rate(assigned: &[bool], power: &[f64], gains: &[f64], frame: &FrameDesign) -> f64 {
    let bits: f64 = assigned
        .iter()
        .zip(power.iter().zip(gains))
        .filter(|(b, _)| **b)
        .map(|(_, (p, g))| (1.0 + g * p).log2())
        .sum();
    frame.cp_efficiency * frame.subcarrier_spacing * bits
}

/// Water-fills `budget` over the tones where `assigned` is set and returns
/// the full-row power vector, the resulting rate, and the unusable flag.
pub(crate) fn fill_user(
    assigned: &[bool],
    gains: &[f64],
    budget: f64,
    frame: &FrameDesign,
) -> (Vec<f64>, f64, bool) {
    let tones: Vec<usize> = (0..assigned.len()).filter(|&k| assigned[k]).collect();
    let own: Vec<f64> = tones.iter().map(|&k| gains[k]).collect();
    let wf = waterfill(&own, budget);
    let mut power = vec![0.0; assigned.len()];
    for (&k, p) in tones.iter().zip(&wf.power) {
        power[k] = *p;
    }
    let rate = user_rate(assigned, &power, gains, frame);
    (power, rate, wf.unusable)
}

/// Greedy assignment from squared channel magnitudes `|H_{m,k}|²`.
pub fn greedy_assign(power_gains: &[Vec<f64>], frame: &FrameDesign, scenario: &Scenario) -> Vec<usize> {
    let gains = GainGrid::from_power_gains(power_gains, frame, scenario);
    greedy_assign_gains(&gains, frame, scenario.tx_power_w)
}

/// Both stages on a prepared gain grid with total power `tx_power`.
pub fn allocate_gains(gains: &GainGrid, frame: &FrameDesign, tx_power: f64) -> Allocation {
    let users = gains.user_count();
    let owners = greedy_assign_gains(gains, frame, tx_power);
    let b = assignment_matrix(&owners, users);
    let budget = tx_power / users as f64;

    let mut power = Vec::with_capacity(users);
    let mut rates = Vec::with_capacity(users);
    let mut unusable_budget = Vec::with_capacity(users);
    for (assigned, row) in b.iter().zip(&gains.rows) {
        let (p, r, flag) = fill_user(assigned, row, budget, frame);
        power.push(p);
        rates.push(r);
        unusable_budget.push(flag);
    }
    Allocation { owners, power, rates, unusable_budget }
}

pub fn allocate(grid: &ChannelGrid, frame: &FrameDesign, scenario: &Scenario) -> Allocation {
    allocate_gains(&GainGrid::from_channel(grid, frame, scenario), frame, scenario.tx_power_w)
}

/// Worst per-user rate; 0 for an empty allocation.
pub fn min_rate(allocation: &Allocation) -> f64 {
    min_of(&allocation.rates)
}

pub(crate) fn min_of(rates: &[f64]) -> f64 {
    if rates.is_empty() {
        return 0.0;
    }
    rates.iter().cloned().fold(f64::INFINITY, f64::min)
}
