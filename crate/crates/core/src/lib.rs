//! Link-level simulation and resource allocation for pinching-antenna downlinks.
//!
//! A dielectric waveguide running along one wall of a room feeds `N` pinch
//! apertures. Every user sees one delayed, phase-rotated tap per aperture, so
//! the downlink is an FIR channel. This crate models that channel, derives an
//! OFDMA numerology from its delay statistics, runs the greedy subcarrier
//! assignment with per-user water-filling, and compares the result with two
//! single-carrier TDMA benchmarks over Monte Carlo sweeps.
//!
//! Module map:
//!
//! - [`geometry`]: room, waveguide and aperture layout, user drops, LoS blockage.
//! - [`channel`]: per-link gains, composite delays, FIR taps, frequency response.
//! - [`frame`]: cyclic prefix, FFT window, subcarrier count and spacing.
//! - [`alloc`]: rate model, greedy assignment, water-filling, exhaustive oracle.
//! - [`baselines`]: single-PA TDMA and MMSE SC-FDE TDMA benchmarks.
//! - [`experiments`]: seeded Monte Carlo sweeps, config files and CSV output.

pub mod alloc;
pub mod baselines;
pub mod channel;
mod error;
pub mod experiments;
pub mod frame;
pub mod geometry;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{Point3, Scenario, ScenarioParams};
