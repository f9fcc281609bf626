//! Spontaneous decay rate of a dipole in front of a two-sided mirror.
//!
//! With the phase distance `u = 2 k x`, orientation parameter `mu` (0 for a
//! dipole parallel to the mirror, 1 for perpendicular) and mirror parameter
//! `xi`, the rate relative to free space is
//!
//! ```text
//! Gamma / Gamma_free = 1 - xi (cos u / u^2 - sin u / u^3)(1 + mu) - xi (sin u / u)(1 - mu)
//! ```
//!
//! At contact (`u = 0`) this tends to `1 + (2 xi / 3)(2 mu - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_in, Error, Result};
use crate::mirror::{MirrorParameter, MirrorSpec, XI_MAX};
use crate::special::{near_field, sinc};

fn check_mu(mu: f64) -> Result<f64> {
    ensure_in("mu", mu, 0.0, 1.0, "[0, 1]")
}

fn check_xi(xi: f64) -> Result<f64> {
    ensure_in("xi", xi, 0.0, XI_MAX, "[0, 1.5]")
}

/// `Gamma_mirr / Gamma_free` at phase distance `u`.
pub fn relative_decay_rate(u: f64, mu: f64, xi: f64) -> Result<f64> {
    ensure_in("u", u, 0.0, f64::INFINITY, "[0, inf)")?;
    check_mu(mu)?;
    check_xi(xi)?;
    if u == 0.0 {
        return contact_limit(mu, xi);
    }
    if u.is_infinite() {
        return Ok(1.0);
    }
    Ok(1.0 - xi * near_field(u) * (1.0 + mu) - xi * sinc(u) * (1.0 - mu))
}

/// The `u -> 0` limit of [`relative_decay_rate`].
pub fn contact_limit(mu: f64, xi: f64) -> Result<f64> {
    check_mu(mu)?;
    check_xi(xi)?;
    Ok(1.0 + (2.0 * xi / 3.0) * (2.0 * mu - 1.0))
}

/// A dipole emitter on side `a` of the mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmitterConfig {
    /// Wavenumber of the emitted light.
    pub k: f64,
    /// Distance from the mirror plane.
    pub x: f64,
    /// Orientation parameter in `[0, 1]`.
    pub mu: f64,
    /// Decay rate in free space.
    pub gamma_free: f64,
}

impl EmitterConfig {
    pub fn new(k: f64, x: f64, mu: f64, gamma_free: f64) -> Result<Self> {
        let cfg = Self {
            k,
            x,
            mu,
            gamma_free,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::OutOfRange {
                name: "k",
                value: self.k,
                range: "(0, inf)",
            });
        }
        ensure_in("x", self.x, 0.0, f64::INFINITY, "[0, inf)")?;
        check_mu(self.mu)?;
        if !(self.gamma_free > 0.0 && self.gamma_free.is_finite()) {
            return Err(Error::OutOfRange {
                name: "gamma_free",
                value: self.gamma_free,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    /// Round-trip phase `2 k x`.
    pub fn phase_distance(&self) -> f64 {
        2.0 * self.k * self.x
    }

    pub fn at_distance(&self, x: f64) -> Self {
        Self { x, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayResult {
    pub ratio: f64,
    pub gamma_mirr: f64,
    pub u: f64,
}

pub fn decay_rate(emitter: &EmitterConfig, mirror: &MirrorSpec) -> Result<DecayResult> {
    emitter.check()?;
    let u = emitter.phase_distance();
    let ratio = relative_decay_rate(u, emitter.mu, mirror.mirror_parameter().value())?;
    Ok(DecayResult {
        ratio,
        gamma_mirr: ratio * emitter.gamma_free,
        u,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySample {
    pub kx: f64,
    pub u: f64,
    pub ratio: f64,
}

/// Relative decay rate sampled over distance for one mirror and orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub xi: f64,
    pub mu: f64,
    pub samples: Vec<DecaySample>,
}

impl DecayCurve {
    /// Samples `relative_decay_rate` at each dimensionless distance `kx`.
    pub fn from_parameter(xi: MirrorParameter, mu: f64, kx_grid: &[f64]) -> Result<Self> {
        check_strictly_increasing(kx_grid)?;
        let samples = kx_grid
            .iter()
            .map(|&kx| {
                let u = 2.0 * kx;
                relative_decay_rate(u, mu, xi.value()).map(|ratio| DecaySample { kx, u, ratio })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            xi: xi.value(),
            mu,
            samples,
        })
    }

    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.ratio)
    }
}

/// Decay curve for `emitter` (its `mu`; its `x` is ignored) over a grid of `k x`.
pub fn decay_curve(
    emitter: &EmitterConfig,
    mirror: &MirrorSpec,
    kx_grid: &[f64],
) -> Result<DecayCurve> {
    emitter.check()?;
    DecayCurve::from_parameter(mirror.mirror_parameter(), emitter.mu, kx_grid)
}

pub(crate) fn check_strictly_increasing(grid: &[f64]) -> Result<()> {
    for (i, pair) in grid.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(Error::NonMonotonicGrid { index: i + 1 });
        }
    }
    if let Some(&first) = grid.first() {
        ensure_in("kx", first, 0.0, f64::INFINITY, "[0, inf)")?;
    }
    Ok(())
}
