//! Exhaustive search over subcarrier assignments for small instances.
//!
//! Every one of the `M^K` owner vectors is scored with the same per-user
//! `P_t / M` water-filling the heuristic uses, so the optimum isolates
//! assignment quality. Per-user rates are precomputed for all `2^K` tone
//! subsets, which makes each enumerated assignment a table lookup.

use serde::{Deserialize, Serialize};

use super::{fill_user, GainGrid};
use crate::channel::ChannelGrid;
use crate::frame::FrameDesign;
use crate::geometry::Scenario;
use crate::{Error, Result};

pub const ORACLE_MAX_TONES: usize = 12;
pub const ORACLE_MAX_USERS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Best owner vector; the lexicographically first among ties.
    pub owners: Vec<usize>,
    pub rates: Vec<f64>,
    pub min_rate: f64,
}

pub fn exhaustive_oracle_gains(gains: &GainGrid, frame: &FrameDesign, tx_power: f64) -> Result<OracleResult> {
    let users = gains.user_count();
    let tones = gains.tone_count();
    if users == 0 || users > ORACLE_MAX_USERS || tones > ORACLE_MAX_TONES {
        return Err(Error::EnumerationLimit {
            tones,
            users,
            max_tones: ORACLE_MAX_TONES,
            max_users: ORACLE_MAX_USERS,
        });
    }
    let budget = tx_power / users as f64;

    // subset_rate[m][mask]: rate of user m owning the tones in `mask`,
    // bit (K-1-k) standing for tone k
    let subsets = 1usize << tones;
    let subset_rate: Vec<Vec<f64>> = gains
        .rows
        .iter()
        .map(|row| {
            (0..subsets)
                .map(|mask| {
                    let assigned: Vec<bool> = (0..tones).map(|k| mask & bit(tones, k) != 0).collect();
                    fill_user(&assigned, row, budget, frame).1
                })
                .collect()
        })
        .collect();

    let mut owners = vec![0usize; tones];
    let mut masks = vec![0usize; users];
    masks[0] = subsets - 1;
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let worst = (0..users)
            .map(|m| subset_rate[m][masks[m]])
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|(b, _)| worst > *b) {
            best = Some((worst, owners.clone()));
        }
        if !advance(&mut owners, &mut masks, users) {
            break;
        }
    }

    let (min_rate, owners) = best.expect("at least one assignment");
    let mut masks = vec![0usize; users];
    for (k, &m) in owners.iter().enumerate() {
        masks[m] |= bit(tones, k);
    }
    let rates = (0..users).map(|m| subset_rate[m][masks[m]]).collect();
    Ok(OracleResult { owners, rates, min_rate })
}

pub fn exhaustive_oracle(grid: &ChannelGrid, frame: &FrameDesign, scenario: &Scenario) -> Result<OracleResult> {
    exhaustive_oracle_gains(&GainGrid::from_channel(grid, frame, scenario), frame, scenario.tx_power_w)
}

fn bit(tones: usize, k: usize) -> usize {
    1 << (tones - 1 - k)
}

/// Next owner vector in lexicographic order (tone 0 most significant),
/// keeping the per-user masks in sync. Returns false after the last one.
fn advance(owners: &mut [usize], masks: &mut [usize], users: usize) -> bool {
    let tones = owners.len();
    for k in (0..tones).rev() {
        let b = bit(tones, k);
        masks[owners[k]] &= !b;
        if owners[k] + 1 < users {
            owners[k] += 1;
            masks[owners[k]] |= b;
            return true;
        }
        owners[k] = 0;
        masks[0] |= b;
    }
    false
}
