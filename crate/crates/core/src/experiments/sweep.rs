use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SweepAxis, SweepPoint};
use crate::alloc::{self, Allocation};
use crate::baselines::{self, BaselineRates};
use crate::channel::{self, ChannelRealization};
use crate::frame::{self, FrameDesign};
use crate::geometry::{self, Scenario};
use crate::{Error, Result};

/// Transmission scheme compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Ofdma,
    ScFdeTdma,
    SinglePa,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Ofdma, Scheme::ScFdeTdma, Scheme::SinglePa];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ofdma => "ofdma",
            Scheme::ScFdeTdma => "sc_fde_tdma",
            Scheme::SinglePa => "single_pa",
        }
    }
}

/// Independent random streams of one drop.
#[derive(Debug, Clone, Copy)]
enum DropStream {
    Users = 0,
    Blockage = 1,
    CenterBlockage = 2,
}

/// Each drop owns its streams, derived from `(master_seed, drop_index)` only,
/// so results do not depend on scheduling and the same drop index sees the
/// same underlying variates at every sweep point.
fn drop_rng(master_seed: u64, drop_index: u64, stream: DropStream) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(drop_index.wrapping_mul(4).wrapping_add(stream as u64));
    rng
}

/// Minimum user rate of each scheme for one drop (bit/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropRates {
    pub ofdma: f64,
    pub sc_fde_tdma: f64,
    pub single_pa: f64,
}

impl DropRates {
    pub fn get(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Ofdma => self.ofdma,
            Scheme::ScFdeTdma => self.sc_fde_tdma,
            Scheme::SinglePa => self.single_pa,
        }
    }
}

/// Per-user summary of the tone grid, for traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub subcarriers: usize,
    pub min_power_gain: Vec<f64>,
    pub max_power_gain: Vec<f64>,
    pub mean_power_gain: Vec<f64>,
}

/// Everything computed for one drop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropTrace {
    pub scenario: Scenario,
    pub master_seed: u64,
    pub drop_index: u64,
    pub realization: ChannelRealization,
    pub center_los: Vec<bool>,
    pub frame: FrameDesign,
    pub grid: GridSummary,
    pub allocation: Allocation,
    pub baselines: BaselineRates,
    pub min_rates: DropRates,
}

pub fn trace_drop(scenario: &Scenario, master_seed: u64, drop_index: u64) -> Result<DropTrace> {
    let users = geometry::sample_users(scenario, &mut drop_rng(master_seed, drop_index, DropStream::Users));
    let pas = geometry::pa_positions(scenario);
    let los = geometry::sample_blockage(
        scenario,
        &users,
        &pas,
        &mut drop_rng(master_seed, drop_index, DropStream::Blockage),
    );
    let center = [geometry::center_pa_position(scenario)];
    let center_los = geometry::sample_blockage(
        scenario,
        &users,
        &center,
        &mut drop_rng(master_seed, drop_index, DropStream::CenterBlockage),
    );
    let center_los: Vec<bool> = (0..users.len()).map(|m| center_los.is_clear(m, 0)).collect();

    let realization = channel::build_realization(scenario, users, los)?;
    let frame = frame::design_frame(scenario, &realization);
    let grid = channel::channel_grid(&realization, &frame);
    let allocation = alloc::allocate(&grid, &frame, scenario);
    let baselines = baselines::baseline_min_rates(&realization, &grid, &frame, scenario, &center_los)?;

    let power = grid.power_gains();
    let summary = GridSummary {
        subcarriers: grid.tone_count(),
        min_power_gain: power.iter().map(|r| r.iter().cloned().fold(f64::INFINITY, f64::min)).collect(),
        max_power_gain: power.iter().map(|r| r.iter().cloned().fold(0.0, f64::max)).collect(),
        mean_power_gain: power.iter().map(|r| r.iter().sum::<f64>() / r.len() as f64).collect(),
    };
    let min_rates = DropRates {
        ofdma: alloc::min_rate(&allocation),
        sc_fde_tdma: baselines.sc_fde,
        single_pa: baselines.single_pa,
    };
    Ok(DropTrace {
        scenario: scenario.clone(),
        master_seed,
        drop_index,
        realization,
        center_los,
        frame,
        grid: summary,
        allocation,
        baselines,
        min_rates,
    })
}

pub fn run_drop(scenario: &Scenario, master_seed: u64, drop_index: u64) -> Result<DropRates> {
    trace_drop(scenario, master_seed, drop_index).map(|t| t.min_rates)
}

/// One output row: the mean minimum rate of one scheme at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub axis_value: f64,
    pub users: usize,
    pub beta: f64,
    pub mean_min_rate_bps: f64,
    pub stderr_bps: f64,
    pub drops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub master_seed: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Row for `(scheme, users, beta, axis_value)`, if present.
    pub fn find(&self, scheme: Scheme, users: usize, beta: f64, axis_value: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.users == users && r.beta == beta && r.axis_value == axis_value)
    }

    /// Mean curve of one scheme along the axis, in axis order.
    pub fn curve(&self, scheme: Scheme, users: usize, beta: f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.users == users && r.beta == beta)
            .map(|r| (r.axis_value, r.mean_min_rate_bps))
            .collect()
    }
}

/// Sample mean and standard error (`s / √n`, zero for a single sample).
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Raw per-drop results of one point, in drop-index order.
pub fn run_point(config: &ExperimentConfig, point: &SweepPoint) -> Result<Vec<DropRates>> {
    let scenario = config.scenario(point)?;
    (0..config.drops as u64)
        .into_par_iter()
        .map(|i| run_drop(&scenario, config.master_seed, i))
        .collect()
}

fn sweep_on_current_pool(config: &ExperimentConfig) -> Result<SweepResult> {
    let mut rows = Vec::new();
    for point in config.points() {
        let drops = run_point(config, &point)?;
        for scheme in Scheme::ALL {
            let values: Vec<f64> = drops.iter().map(|d| d.get(scheme)).collect();
            let (mean, stderr) = mean_and_stderr(&values);
            rows.push(SweepRow {
                scheme,
                axis_value: point.axis_value,
                users: point.users,
                beta: point.beta,
                mean_min_rate_bps: mean,
                stderr_bps: stderr,
                drops: values.len(),
            });
        }
    }
    Ok(SweepResult { axis: config.axis, master_seed: config.master_seed, rows })
}

/// Runs every grid point of `config`. With `threads = Some(n)` the drops run
/// on a dedicated pool of `n` workers; output does not depend on `n`.
pub fn run_sweep(config: &ExperimentConfig, threads: Option<usize>) -> Result<SweepResult> {
    config.validate()?;
    match threads {
        None => sweep_on_current_pool(config),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(|| sweep_on_current_pool(config))
        }
    }
}
