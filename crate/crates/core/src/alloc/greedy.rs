//! Stage one: greedy max-min subcarrier assignment.

use super::GainGrid;
use crate::frame::FrameDesign;

/// Strongest and second-strongest gain on one tone.
#[derive(Clone, Copy)]
struct TopTwo {
    best_user: usize,
    best: f64,
    second: f64,
}

impl TopTwo {
    fn of_tone(gains: &GainGrid, tone: usize) -> Self {
        let mut top = TopTwo { best_user: usize::MAX, best: 0.0, second: 0.0 };
        for (m, row) in gains.rows.iter().enumerate() {
            let g = row[tone];
            if top.best_user == usize::MAX || g > top.best {
                top.second = top.best;
                top.best = g;
                top.best_user = m;
            } else if g > top.second {
                top.second = g;
            }
        }
        top
    }

    /// Strongest gain among users other than `user`.
    fn rival(&self, user: usize) -> f64 {
        if user == self.best_user {
            self.second
        } else {
            self.best
        }
    }
}

/// Relative advantage `own / max_{q != m} g_q`.
///
/// A zero denominator with a usable tone counts as an infinite advantage;
/// a tone that is dead for everyone scores zero.
fn advantage(own: f64, rival: f64) -> f64 {
    if rival > 0.0 {
        own / rival
    } else if own > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Assigns every tone to exactly one user; returns the owner of each tone.
///
/// Each step hands the user with the lowest provisional rate (lowest index
/// on ties) the unassigned tone with the largest relative advantage, ties
/// going to the larger own gain and then the lower tone index. Provisional
/// rates assume equal power `P_t / K` per tone. A user whose gains on every
/// remaining tone are zero is dropped from selection for the rest of the run.
pub fn greedy_assign_gains(gains: &GainGrid, frame: &FrameDesign, tx_power: f64) -> Vec<usize> {
    let users = gains.user_count();
    let tones = gains.tone_count();
    let tone_power = tx_power / tones as f64;
    let rate_scale = frame.cp_efficiency * frame.subcarrier_spacing;
    let top: Vec<TopTwo> = (0..tones).map(|k| TopTwo::of_tone(gains, k)).collect();

    let mut owner = vec![usize::MAX; tones];
    // kept in ascending tone order
    let mut unassigned: Vec<usize> = (0..tones).collect();
    let mut provisional = vec![0.0f64; users];
    let mut starved = vec![false; users];

    while !unassigned.is_empty() {
        let pick = |include_starved: bool| {
            (0..users)
                .filter(|&m| include_starved || !starved[m])
                .min_by(|&a, &b| provisional[a].total_cmp(&provisional[b]).then(a.cmp(&b)))
        };
        let user = match pick(false) {
            Some(m) => m,
            // no user can gain from any remaining tone
            None => pick(true).expect("at least one user"),
        };
        let row = &gains.rows[user];
        if !starved[user] && unassigned.iter().all(|&k| row[k] == 0.0) {
            starved[user] = true;
            continue;
        }

        // strict improvement keeps the lowest tone index among ties
        let mut chosen = 0;
        let mut chosen_key = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (slot, &k) in unassigned.iter().enumerate() {
            let key = (advantage(row[k], top[k].rival(user)), row[k]);
            if key.0 > chosen_key.0 || (key.0 == chosen_key.0 && key.1 > chosen_key.1) {
                chosen = slot;
                chosen_key = key;
            }
        }
        let tone = unassigned.remove(chosen);
        owner[tone] = user;
        provisional[user] += rate_scale * (1.0 + row[tone] * tone_power).log2();
    }
    owner
}
