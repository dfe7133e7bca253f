//! FIR channel model of the waveguide-fed aperture array.
//!
//! Each user receives one tap per aperture. The tap gain is the product of
//! the guided phase rotation from the feed and the free-space link gain, and
//! the tap delay is the guided plus free-space propagation time. Frequency
//! responses are evaluated analytically from the tap list.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frame::FrameDesign;
use crate::geometry::{self, LosMatrix, Point3, Scenario};
use crate::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wavelength at `carrier_hz`.
pub fn wavelength(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_hz
}

/// Free-space path-loss constant `c² / (16 π² f_c²) = (λ / 4π)²`.
pub fn path_loss_constant(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT * SPEED_OF_LIGHT / (16.0 * PI * PI * carrier_hz * carrier_hz)
}

/// Free-space gain between a user and an aperture,
/// `α √η e^{-j 2π r / λ} / r`.
pub fn link_gain(user: &Point3, pa: &Point3, alpha: f64, carrier_hz: f64) -> Result<Complex64> {
    let r = user.distance(pa);
    if r == 0.0 {
        return Err(Error::ZeroDistance { x: pa.x, y: pa.y, z: pa.z });
    }
    if alpha == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k0 = 2.0 * PI / wavelength(carrier_hz);
    let magnitude = alpha * path_loss_constant(carrier_hz).sqrt() / r;
    Ok(Complex64::from_polar(magnitude, -k0 * r))
}

/// Guided phase rotation from the feed to an aperture, `e^{-j 2π L / λ_g}`
/// with `λ_g = λ / n_e`.
pub fn waveguide_phase(pa: &Point3, feed: &Point3, carrier_hz: f64, refractive_index: f64) -> Complex64 {
    let guided_wavelength = wavelength(carrier_hz) / refractive_index;
    let length = feed.distance(pa);
    Complex64::from_polar(1.0, -2.0 * PI * length / guided_wavelength)
}

/// Guided plus free-space propagation time from the feed through `pa` to `user`.
pub fn composite_delay(user: &Point3, pa: &Point3, feed: &Point3, refractive_index: f64) -> f64 {
    user.distance(pa) / SPEED_OF_LIGHT + refractive_index * feed.distance(pa) / SPEED_OF_LIGHT
}

/// One FIR tap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tap {
    pub gain: Complex64,
    /// Seconds.
    pub delay: f64,
}

impl Tap {
    pub fn new(gain: Complex64, delay: f64) -> Self {
        Self { gain, delay }
    }
}

/// `Σ_n g_n e^{-j 2π f τ_n}` for an arbitrary tap list, `f` relative to the carrier.
pub fn taps_response(taps: &[Tap], f_offset: f64) -> Complex64 {
    taps.iter()
        .map(|t| t.gain * Complex64::from_polar(1.0, -2.0 * PI * f_offset * t.delay))
        .sum()
}

/// One Monte Carlo channel draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub users: Vec<Point3>,
    pub pas: Vec<Point3>,
    pub feed: Point3,
    pub los: LosMatrix,
    /// `taps[m][n]`: tap of aperture `n` seen by user `m`.
    pub taps: Vec<Vec<Tap>>,
}

impl ChannelRealization {
    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn pa_count(&self) -> usize {
        self.pas.len()
    }

    /// Delays of the unblocked taps of `user`.
    pub fn clear_delays(&self, user: usize) -> impl Iterator<Item = f64> + '_ {
        self.taps[user]
            .iter()
            .zip(self.los.row(user))
            .filter(|(_, clear)| **clear)
            .map(|(t, _)| t.delay)
    }
}

/// Builds the tap list for every (user, aperture) pair of `scenario`.
pub fn build_realization(
    scenario: &Scenario,
    users: Vec<Point3>,
    los: LosMatrix,
) -> Result<ChannelRealization> {
    let pas = geometry::pa_positions(scenario);
    if los.users() != users.len() || los.pas() != pas.len() {
        return Err(Error::Dimension(format!(
            "LoS matrix is {}x{}, expected {}x{}",
            los.users(),
            los.pas(),
            users.len(),
            pas.len()
        )));
    }
    let feed = geometry::feed_position(scenario);
    let fc = scenario.carrier_hz;
    let ne = scenario.refractive_index;

    let phases: Vec<Complex64> = pas.iter().map(|pa| waveguide_phase(pa, &feed, fc, ne)).collect();
    let mut taps = Vec::with_capacity(users.len());
    for (m, user) in users.iter().enumerate() {
        let mut row = Vec::with_capacity(pas.len());
        for (n, pa) in pas.iter().enumerate() {
            let gain = phases[n] * link_gain(user, pa, los.alpha(m, n), fc)?;
            row.push(Tap::new(gain, composite_delay(user, pa, &feed, ne)));
        }
        taps.push(row);
    }
    Ok(ChannelRealization { users, pas, feed, los, taps })
}

/// Frequency response of user `m` at `f_offset = f - f_c`.
pub fn frequency_response(realization: &ChannelRealization, m: usize, f_offset: f64) -> Complex64 {
    taps_response(&realization.taps[m], f_offset)
}

/// Frequency-response samples on the OFDMA tone grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelGrid {
    /// `response[m][i]` is `H_m(k Δf)` for tone `k = i - K/2`.
    pub response: Vec<Vec<Complex64>>,
    /// Tone offsets `k Δf` from the carrier, ascending from `k = -K/2`.
    pub subcarrier_offsets: Vec<f64>,
}

impl ChannelGrid {
    pub fn user_count(&self) -> usize {
        self.response.len()
    }

    pub fn tone_count(&self) -> usize {
        self.subcarrier_offsets.len()
    }

    /// Grid column for signed tone index `k ∈ [-K/2, K/2)`.
    pub fn column(&self, k: i64) -> usize {
        (k + self.tone_count() as i64 / 2) as usize
    }

    /// `|H_{m,k}|²` for every user and tone.
    pub fn power_gains(&self) -> Vec<Vec<f64>> {
        self.response
            .iter()
            .map(|row| row.iter().map(|h| h.norm_sqr()).collect())
            .collect()
    }
}

/// Signed tone offsets `k Δf` for `k = -K/2 .. K/2 - 1`.
pub fn subcarrier_offsets(frame: &FrameDesign) -> Vec<f64> {
    let half = (frame.subcarriers / 2) as i64;
    (0..frame.subcarriers as i64)
        .map(|i| (i - half) as f64 * frame.subcarrier_spacing)
        .collect()
}

pub fn channel_grid(realization: &ChannelRealization, frame: &FrameDesign) -> ChannelGrid {
    let offsets = subcarrier_offsets(frame);
    let response = (0..realization.user_count())
        .map(|m| offsets.iter().map(|&f| frequency_response(realization, m, f)).collect())
        .collect();
    ChannelGrid { response, subcarrier_offsets: offsets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame;
    use crate::geometry::ScenarioParams;
    use proptest::prelude::*;

    const NS: f64 = 1e-9;

    fn scenario(pa_count: usize, user_count: usize) -> Scenario {
        Scenario::new(ScenarioParams { pa_count, user_count, ..ScenarioParams::default() }).unwrap()
    }

    #[test]
    fn path_loss_constant_at_28ghz() {
        // λ = c / f_c evaluated by hand: 0.0107068735 m; λ / 4π = 8.52026e-4
        let root = path_loss_constant(28e9).sqrt();
        assert!((root - 8.52026e-4).abs() < 1e-9, "{root}");
        assert!((wavelength(28e9) - 0.0107068735).abs() < 1e-10);
    }

    #[test]
    fn path_loss_constant_scaling() {
        for fc in [1e9, 28e9, 60e9, 140e9] {
            let r = path_loss_constant(fc) / path_loss_constant(2.0 * fc);
            assert!((r - 4.0).abs() < 1e-12);
            let k = 4.0 * PI / wavelength(fc);
            assert!((path_loss_constant(fc) * k * k - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn blocked_link_is_zero() {
        let g = link_gain(&Point3::new(1.0, 1.0, 0.0), &Point3::new(0.0, 0.0, 3.0), 0.0, 28e9).unwrap();
        assert_eq!(g, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn link_gain_below_pa() {
        let g = link_gain(&Point3::new(15.0, 0.0, 0.0), &Point3::new(15.0, 0.0, 3.0), 1.0, 28e9).unwrap();
        let expected = path_loss_constant(28e9).sqrt() / 3.0;
        assert!((g.norm() - expected).abs() <= 1e-15);
        assert!((g.norm() - 2.840e-4).abs() < 1e-6);
    }

    #[test]
    fn link_gain_integer_wavelengths_has_zero_phase() {
        let lambda = wavelength(28e9);
        for cycles in [1.0, 17.0, 280.0] {
            let user = Point3::new(0.0, 0.0, 0.0);
            let pa = Point3::new(0.0, 0.0, cycles * lambda);
            let g = link_gain(&user, &pa, 1.0, 28e9).unwrap();
            // the exact phase is -2π·cycles; wrap it
            assert!(g.arg().abs() < 1e-9, "cycles {cycles}: {}", g.arg());
        }
    }

    #[test]
    fn link_gain_rejects_zero_distance() {
        let p = Point3::new(1.0, 2.0, 3.0);
        assert!(matches!(link_gain(&p, &p, 1.0, 28e9), Err(Error::ZeroDistance { .. })));
    }

    #[test]
    fn waveguide_phase_cases() {
        let feed = Point3::new(0.0, 0.0, 3.0);
        assert_eq!(waveguide_phase(&feed, &feed, 28e9, 1.4), Complex64::new(1.0, 0.0));
        for x in [0.3, 1.7, 12.0, 29.9] {
            let h = waveguide_phase(&Point3::new(x, 0.0, 3.0), &feed, 28e9, 1.4);
            assert!((h.norm() - 1.0).abs() < 1e-12);
        }
        let half = wavelength(28e9) / 1.4 / 2.0;
        let h = waveguide_phase(&Point3::new(half, 0.0, 3.0), &feed, 28e9, 1.4);
        assert!((h - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn composite_delay_walkthrough() {
        // two apertures 3 m apart on the waveguide; the farther one adds 3 m
        // of guided path and 3 m of free-space path for a user on the axis
        let feed = Point3::new(0.0, 0.0, 3.0);
        let near = Point3::new(3.0, 0.0, 3.0);
        let far = Point3::new(6.0, 0.0, 3.0);
        let guided = composite_delay(&far, &far, &feed, 1.4) - composite_delay(&near, &near, &feed, 1.4);
        let free = composite_delay(&Point3::new(0.0, 0.0, 3.0), &far, &far, 1.4)
            - composite_delay(&Point3::new(0.0, 0.0, 3.0), &near, &near, 1.4);
        let user = Point3::new(0.0, 0.0, 3.0);
        let total = composite_delay(&user, &far, &feed, 1.4) - composite_delay(&user, &near, &feed, 1.4);
        assert!((guided - 4.2 / SPEED_OF_LIGHT).abs() < 1e-20);
        assert!((free - 3.0 / SPEED_OF_LIGHT).abs() < 1e-20);
        assert!((guided / NS - 14.0).abs() / 14.0 < 0.02);
        assert!((free / NS - 10.0).abs() / 10.0 < 0.02);
        assert!((total / NS - 24.0).abs() / 24.0 < 0.02);
    }

    #[test]
    fn composite_delay_zero_and_linear() {
        let p = Point3::new(4.0, 0.0, 3.0);
        assert_eq!(composite_delay(&p, &p, &p, 1.4), 0.0);
        let feed = Point3::new(0.0, 0.0, 0.0);
        let pa = Point3::new(2.0, 0.0, 0.0);
        let user = Point3::new(2.0, 1.5, 0.0);
        let a = composite_delay(&user, &pa, &feed, 1.4);
        let b = composite_delay(&Point3::new(4.0, 3.0, 0.0), &Point3::new(4.0, 0.0, 0.0), &feed, 1.4);
        assert!((b - 2.0 * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn realization_blocked_and_single_pa() {
        let s = scenario(4, 3);
        let users = vec![Point3::new(3.0, 1.0, 0.0), Point3::new(9.0, -2.0, 0.0), Point3::new(25.0, 4.0, 0.0)];
        let r = build_realization(&s, users.clone(), LosMatrix::all_blocked(3, 4)).unwrap();
        assert!(r.taps.iter().flatten().all(|t| t.gain == Complex64::new(0.0, 0.0)));

        let s1 = scenario(1, 3);
        let r = build_realization(&s1, users, LosMatrix::all_clear(3, 1)).unwrap();
        assert!(r.taps.iter().all(|row| row.len() == 1));
    }

    #[test]
    fn realization_matches_factor_product() {
        let s = scenario(5, 2);
        let users = vec![Point3::new(7.3, 2.2, 0.0), Point3::new(21.0, -4.1, 0.0)];
        let los = LosMatrix::from_fn(2, 5, |m, n| (m + n) % 3 != 0);
        let r = build_realization(&s, users.clone(), los.clone()).unwrap();
        let feed = geometry::feed_position(&s);
        for (m, user) in users.iter().enumerate() {
            for (n, pa) in geometry::pa_positions(&s).iter().enumerate() {
                let h0 = waveguide_phase(pa, &feed, s.carrier_hz, s.refractive_index);
                let hm = link_gain(user, pa, los.alpha(m, n), s.carrier_hz).unwrap();
                let expected = h0 * hm;
                let got = r.taps[m][n].gain;
                assert!((got - expected).norm() <= 1e-12 * expected.norm().max(f64::MIN_POSITIVE));
                let delay = user.distance(pa) / SPEED_OF_LIGHT + 1.4 * feed.distance(pa) / SPEED_OF_LIGHT;
                assert!((r.taps[m][n].delay - delay).abs() <= 1e-12 * delay);
                let bound = los.alpha(m, n) * path_loss_constant(s.carrier_hz).sqrt() / user.distance(pa);
                assert!((got.norm() - bound).abs() <= 1e-12 * bound.max(1e-30));
            }
        }
    }

    #[test]
    fn realization_rejects_mismatched_los() {
        let s = scenario(3, 1);
        let err = build_realization(&s, vec![Point3::new(1.0, 0.0, 0.0)], LosMatrix::all_clear(1, 2));
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn response_at_carrier_is_tap_sum() {
        let taps = vec![
            Tap::new(Complex64::new(0.3, -0.1), 5.0 * NS),
            Tap::new(Complex64::new(-0.2, 0.4), 17.0 * NS),
        ];
        let sum: Complex64 = taps.iter().map(|t| t.gain).sum();
        assert_eq!(taps_response(&taps, 0.0), sum);
    }

    #[test]
    fn single_tap_is_flat() {
        let taps = vec![Tap::new(Complex64::new(0.7, 0.2), 31.0 * NS)];
        let mags: Vec<f64> = (-64..64).map(|k| taps_response(&taps, k as f64 * 3.9e6).norm()).collect();
        let max = mags.iter().cloned().fold(f64::MIN, f64::max);
        let min = mags.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min - 1.0 <= 1e-12);
    }

    #[test]
    fn grid_rows_flat_for_single_pa() {
        let s = scenario(1, 2);
        let users = vec![Point3::new(3.0, 1.0, 0.0), Point3::new(20.0, -3.0, 0.0)];
        let r = build_realization(&s, users, LosMatrix::all_clear(2, 1)).unwrap();
        let f = frame::FrameDesign::from_delay_stats(s.bandwidth_hz, 24.0 * NS, 12.0 * NS);
        assert_eq!(f.subcarriers, 64);
        let grid = channel_grid(&r, &f);
        for row in &grid.response {
            let max = row.iter().map(|h| h.norm()).fold(f64::MIN, f64::max);
            let min = row.iter().map(|h| h.norm()).fold(f64::MAX, f64::min);
            assert!(max / min - 1.0 <= 1e-12);
        }
    }

    #[test]
    fn grid_k8_single_pa_constant_magnitude() {
        let s = scenario(1, 1);
        let r = build_realization(&s, vec![Point3::new(2.0, 3.0, 0.0)], LosMatrix::all_clear(1, 1)).unwrap();
        let f = frame::FrameDesign::with_subcarriers(s.bandwidth_hz, 8, 0.0);
        let grid = channel_grid(&r, &f);
        assert_eq!(grid.tone_count(), 8);
        let m0 = grid.response[0][0].norm();
        assert!(grid.response[0].iter().all(|h| (h.norm() - m0).abs() <= 1e-12 * m0));
    }

    #[test]
    fn grid_matches_pointwise_calls() {
        let s = scenario(6, 2);
        let users = vec![Point3::new(8.0, 1.0, 0.0), Point3::new(26.0, -3.5, 0.0)];
        let r = build_realization(&s, users, LosMatrix::all_clear(2, 6)).unwrap();
        let f = frame::design_frame(&s, &r);
        let grid = channel_grid(&r, &f);
        let half = f.subcarriers as i64 / 2;
        for m in 0..2 {
            for k in -half..half {
                let h = frequency_response(&r, m, k as f64 * f.subcarrier_spacing);
                assert_eq!(grid.response[m][grid.column(k)], h);
            }
        }
        assert_eq!(grid.subcarrier_offsets[0], -(half as f64) * f.subcarrier_spacing);
    }

    #[test]
    fn grid_not_conjugate_symmetric() {
        let taps = vec![
            Tap::new(Complex64::from_polar(1.0, 0.4), 0.0),
            Tap::new(Complex64::from_polar(0.8, -1.3), 24.0 * NS),
        ];
        let df = 7.8125e6;
        let mut asymmetric = 0;
        for k in 1..32 {
            let pos = taps_response(&taps, k as f64 * df);
            let neg = taps_response(&taps, -(k as f64) * df);
            if (neg - pos.conj()).norm() > 1e-6 {
                asymmetric += 1;
            }
        }
        assert!(asymmetric > 0);
    }

    #[test]
    fn blocked_user_row_is_zero() {
        let s = scenario(4, 2);
        let users = vec![Point3::new(4.0, 1.0, 0.0), Point3::new(18.0, -2.0, 0.0)];
        let los = LosMatrix::from_fn(2, 4, |m, _| m == 0);
        let r = build_realization(&s, users, los).unwrap();
        let f = frame::design_frame(&s, &r);
        let grid = channel_grid(&r, &f);
        assert!(grid.response[1].iter().all(|h| *h == Complex64::new(0.0, 0.0)));
        assert!(grid.response[0].iter().any(|h| h.norm() > 0.0));
    }

    fn arb_taps() -> impl Strategy<Value = Vec<Tap>> {
        prop::collection::vec(
            (0.0f64..1.0, -PI..PI, 0.0f64..200e-9).prop_map(|(a, ph, d)| Tap::new(Complex64::from_polar(a, ph), d)),
            1..=6,
        )
    }

    proptest! {
        #[test]
        fn response_bounded_by_tap_magnitudes(taps in arb_taps(), f in -250e6f64..250e6) {
            let bound: f64 = taps.iter().map(|t| t.gain.norm()).sum();
            prop_assert!(taps_response(&taps, f).norm() <= bound * (1.0 + 1e-12));
        }

        #[test]
        fn response_lipschitz(taps in arb_taps(), f1 in -250e6f64..250e6, f2 in -250e6f64..250e6) {
            let mag: f64 = taps.iter().map(|t| t.gain.norm()).sum();
            let tau_max = taps.iter().map(|t| t.delay).fold(0.0, f64::max);
            let diff = (taps_response(&taps, f1) - taps_response(&taps, f2)).norm();
            prop_assert!(diff <= 2.0 * PI * (f1 - f2).abs() * mag * tau_max * (1.0 + 1e-9) + 1e-12);
        }
    }
}
