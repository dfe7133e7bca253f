//! Room and waveguide layout, random user drops and LoS blockage.
//!
//! Coordinates: the room spans `x ∈ [0, D_x]`, `y ∈ [-D_y/2, D_y/2]` on the
//! floor (`z = 0`). The waveguide runs along `y = 0` at height `d`, fed at its
//! `x = 0` end, so the guided path length to an aperture equals its `x`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point in the room, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Raw scenario parameters. Validated into a [`Scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    /// Room length along the waveguide (m).
    pub room_length: f64,
    /// Room width across the waveguide (m).
    pub room_width: f64,
    /// Waveguide height above the floor (m).
    pub waveguide_height: f64,
    pub pa_count: usize,
    pub user_count: usize,
    /// Carrier frequency (Hz).
    pub carrier_hz: f64,
    /// Effective refractive index of the waveguide.
    pub refractive_index: f64,
    /// LoS blockage density (1/m).
    pub blockage_beta: f64,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Total transmit power (W).
    pub tx_power_w: f64,
    /// Total noise power over the band (W).
    pub noise_power_w: f64,
}

impl Default for ScenarioParams {
    /// 30 m x 10 m room, 28 GHz, n_e = 1.4, -90 dBm noise, 500 MHz, 20 dBm,
    /// waveguide at 3 m, two users, ten apertures.
    fn default() -> Self {
        Self {
            room_length: 30.0,
            room_width: 10.0,
            waveguide_height: 3.0,
            pa_count: 10,
            user_count: 2,
            carrier_hz: 28e9,
            refractive_index: 1.4,
            blockage_beta: 0.05,
            bandwidth_hz: 500e6,
            tx_power_w: 0.1,
            noise_power_w: 1e-12,
        }
    }
}

/// Validated, immutable scenario. Dereferences to its [`ScenarioParams`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Scenario(ScenarioParams);

impl Scenario {
    pub fn new(params: ScenarioParams) -> Result<Self> {
        let p = &params;
        let positive = [
            ("room_length", p.room_length),
            ("room_width", p.room_width),
            ("waveguide_height", p.waveguide_height),
            ("carrier_hz", p.carrier_hz),
            ("bandwidth_hz", p.bandwidth_hz),
            ("tx_power_w", p.tx_power_w),
            ("noise_power_w", p.noise_power_w),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        if p.pa_count == 0 {
            return Err(Error::InvalidScenario("pa_count must be at least 1".into()));
        }
        if p.user_count == 0 {
            return Err(Error::InvalidScenario("user_count must be at least 1".into()));
        }
        if !(p.refractive_index.is_finite() && p.refractive_index >= 1.0) {
            return Err(Error::InvalidScenario(format!(
                "refractive_index must be >= 1, got {}",
                p.refractive_index
            )));
        }
        if !(p.blockage_beta >= 0.0) || p.blockage_beta.is_nan() {
            return Err(Error::InvalidScenario(format!(
                "blockage_beta must be >= 0, got {}",
                p.blockage_beta
            )));
        }
        Ok(Self(params))
    }

    pub fn params(&self) -> &ScenarioParams {
        &self.0
    }

    /// Noise power spectral density N_0 = noise_power / B (W/Hz).
    pub fn noise_psd(&self) -> f64 {
        self.0.noise_power_w / self.0.bandwidth_hz
    }
}

impl std::ops::Deref for Scenario {
    type Target = ScenarioParams;

    fn deref(&self) -> &ScenarioParams {
        &self.0
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let params = ScenarioParams::deserialize(de)?;
        Scenario::new(params).map_err(serde::de::Error::custom)
    }
}

/// Binary LoS indicators `alpha[m][n]`, row-major over users.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LosMatrix {
    users: usize,
    pas: usize,
    alpha: Vec<bool>,
}

impl LosMatrix {
    pub fn from_fn(users: usize, pas: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut alpha = Vec::with_capacity(users * pas);
        for m in 0..users {
            for n in 0..pas {
                alpha.push(f(m, n));
            }
        }
        Self { users, pas, alpha }
    }

    pub fn all_clear(users: usize, pas: usize) -> Self {
        Self::from_fn(users, pas, |_, _| true)
    }

    pub fn all_blocked(users: usize, pas: usize) -> Self {
        Self::from_fn(users, pas, |_, _| false)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn pas(&self) -> usize {
        self.pas
    }

    pub fn is_clear(&self, user: usize, pa: usize) -> bool {
        self.alpha[user * self.pas + pa]
    }

    /// Indicator as 0.0 / 1.0.
    pub fn alpha(&self, user: usize, pa: usize) -> f64 {
        if self.is_clear(user, pa) {
            1.0
        } else {
            0.0
        }
    }

    pub fn row(&self, user: usize) -> &[bool] {
        &self.alpha[user * self.pas..(user + 1) * self.pas]
    }
}

/// Aperture positions `(n D_x / (N+1), 0, d)` for `n = 1..=N`.
pub fn pa_positions(scenario: &Scenario) -> Vec<Point3> {
    let n_pa = scenario.pa_count;
    let spacing = scenario.room_length / (n_pa as f64 + 1.0);
    (1..=n_pa)
        .map(|n| Point3::new(n as f64 * spacing, 0.0, scenario.waveguide_height))
        .collect()
}

/// Waveguide feed point at the `x = 0` end.
pub fn feed_position(scenario: &Scenario) -> Point3 {
    Point3::new(0.0, 0.0, scenario.waveguide_height)
}

/// Center-of-room aperture used by the single-PA benchmark.
pub fn center_pa_position(scenario: &Scenario) -> Point3 {
    Point3::new(scenario.room_length / 2.0, 0.0, scenario.waveguide_height)
}

/// Drops `M` users uniformly on the floor. Users are drawn in index order
/// (x then y), so the first `M'` users of an `M`-user drop coincide with an
/// `M'`-user drop from the same stream.
pub fn sample_users<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Vec<Point3> {
    let half_width = scenario.room_width / 2.0;
    (0..scenario.user_count)
        .map(|_| {
            let x = rng.gen::<f64>() * scenario.room_length;
            let y = rng.gen::<f64>() * scenario.room_width - half_width;
            Point3::new(x, y, 0.0)
        })
        .collect()
}

/// Probability that the link between `user` and `pa` is unobstructed.
pub fn los_probability(user: &Point3, pa: &Point3, beta: f64) -> f64 {
    (-beta * user.distance(pa)).exp()
}

/// Draws one Bernoulli LoS indicator per (user, aperture) link.
///
/// Each link consumes exactly one uniform variate `u` and is clear when
/// `u < P(LoS)`. Holding the stream fixed while raising `beta` can therefore
/// only block more links.
pub fn sample_blockage<R: Rng + ?Sized>(
    scenario: &Scenario,
    users: &[Point3],
    pas: &[Point3],
    rng: &mut R,
) -> LosMatrix {
    let beta = scenario.blockage_beta;
    LosMatrix::from_fn(users.len(), pas.len(), |m, n| {
        let u: f64 = rng.gen();
        u < los_probability(&users[m], &pas[n], beta)
    })
}
