//! Far-field quadrature cross-check of the closed-form decay rate.
//!
//! The emitter and its mirror image are modelled as two coherent point dipoles
//! in free space, separated along the mirror normal by the round-trip distance
//! `2x` (phase `u = 2kx`). The image moment is the real moment with its
//! components parallel to the mirror scaled by `-rho` and its normal component
//! by `+rho`.
//!
//! The rate of the real emitter is the power it supplies, i.e. its own power
//! plus its half of the symmetric interference term, `P_11 + Re P_12`. With the
//! far-field powers of the pair and of each dipole alone this is
//! `(P_pair - P_image + P_real) / 2`, which is what [`FarFieldOracle`]
//! integrates. Nothing here uses the closed-form kernels.
//!
//! The image amplitude `rho = 2 xi / 3` is fixed by matching the perfect
//! mirror (`xi = 3/2`) to a unit-strength image.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_in, Error, Result};
use crate::mirror::{MirrorParameter, XI_MAX};
use crate::quadrature::{gauss_legendre, midpoint, Rule};

pub const DEFAULT_NODES: usize = 128;
/// Allowed change of a result when the node count is doubled.
pub const DEFAULT_CONVERGENCE_TOLERANCE: f64 = 1e-10;
/// Smallest node count accepted for acceptance-grade runs.
pub const MIN_ACCEPTANCE_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    ParallelToMirror,
    PerpendicularToMirror,
}

impl Orientation {
    /// Unit moment of the real dipole; the mirror normal is `z`.
    fn moment(self) -> [f64; 3] {
        match self {
            Orientation::ParallelToMirror => [1.0, 0.0, 0.0],
            Orientation::PerpendicularToMirror => [0.0, 0.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImagePairConfig {
    pub u: f64,
    pub rho: f64,
    pub orientation: Orientation,
}

impl ImagePairConfig {
    pub fn new(u: f64, rho: f64, orientation: Orientation) -> Result<Self> {
        ensure_in("u", u, 0.0, f64::MAX, "[0, inf)")?;
        ensure_in("rho", rho, 0.0, 1.0, "[0, 1]")?;
        Ok(Self {
            u,
            rho,
            orientation,
        })
    }

    pub fn from_mirror_parameter(
        u: f64,
        xi: MirrorParameter,
        orientation: Orientation,
    ) -> Result<Self> {
        Self::new(u, xi.image_amplitude(), orientation)
    }

    fn image_moment(&self) -> [f64; 3] {
        let p = self.orientation.moment();
        [-self.rho * p[0], -self.rho * p[1], self.rho * p[2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    /// Gauss-Legendre in `cos(theta)`, uniform in azimuth.
    GaussLegendre,
    /// Midpoint rule in `cos(theta)`, uniform in azimuth.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Nodes per angular dimension.
    pub nodes: usize,
    pub scheme: QuadratureScheme,
    /// Maximum change allowed when the node count is doubled.
    pub tolerance: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
            scheme: QuadratureScheme::GaussLegendre,
            tolerance: DEFAULT_CONVERGENCE_TOLERANCE,
        }
    }
}

impl QuadratureSettings {
    pub fn with_nodes(nodes: usize) -> Self {
        Self {
            nodes,
            ..Self::default()
        }
    }
}

/// Far-field powers of a dipole pair, in units of the analytic single-dipole power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPowers {
    pub real: f64,
    pub image: f64,
    pub pair: f64,
}

impl PairPowers {
    /// Power supplied by the real dipole relative to an isolated dipole.
    pub fn emitter_share(&self) -> f64 {
        (self.pair - self.image + self.real) / (2.0 * self.real)
    }

    /// Total power of the coherent pair relative to an isolated dipole.
    pub fn total(&self) -> f64 {
        self.pair / self.real
    }
}

/// Product rule on the unit sphere at two resolutions (`n` and `2n`), built once.
#[derive(Debug, Clone)]
pub struct FarFieldOracle {
    settings: QuadratureSettings,
    coarse: SphereRule,
    fine: SphereRule,
}

#[derive(Debug, Clone)]
struct SphereRule {
    polar: Rule,
    azimuth: Vec<(f64, f64)>,
    azimuth_weight: f64,
}

impl SphereRule {
    fn new(n: usize, scheme: QuadratureScheme) -> Self {
        let polar = match scheme {
            QuadratureScheme::GaussLegendre => gauss_legendre(n),
            QuadratureScheme::Midpoint => midpoint(n),
        };
        let step = std::f64::consts::TAU / n as f64;
        let azimuth = (0..n).map(|j| (j as f64 * step).sin_cos()).collect();
        Self {
            polar,
            azimuth,
            azimuth_weight: step,
        }
    }

    fn powers(&self, config: &ImagePairConfig) -> PairPowers {
        let p1 = config.orientation.moment();
        let p2 = config.image_moment();
        let half = 0.5 * config.u;

        let (mut real, mut image, mut pair) = (0.0, 0.0, 0.0);
        for (&c, &w) in self.polar.nodes.iter().zip(&self.polar.weights) {
            let s = (1.0 - c * c).max(0.0).sqrt();
            // Far-field phase exp(-i k n.r0) for the dipole at z = +u/2 and its image at -u/2.
            let ph1 = Complex64::from_polar(1.0, -half * c);
            let ph2 = ph1.conj();
            let (mut r_row, mut i_row, mut p_row) = (0.0, 0.0, 0.0);
            for &(sin_phi, cos_phi) in &self.azimuth {
                let n = [s * cos_phi, s * sin_phi, c];
                let e1 = transverse(&p1, &n);
                let e2 = transverse(&p2, &n);
                for k in 0..3 {
                    let a = ph1 * e1[k];
                    let b = ph2 * e2[k];
                    r_row += a.norm_sqr();
                    i_row += b.norm_sqr();
                    p_row += (a + b).norm_sqr();
                }
            }
            real += w * r_row;
            image += w * i_row;
            pair += w * p_row;
        }
        // Analytic isolated-dipole power: int sin^2 dOmega = 8 pi / 3.
        let scale = self.azimuth_weight * 3.0 / (8.0 * std::f64::consts::PI);
        PairPowers {
            real: real * scale,
            image: image * scale,
            pair: pair * scale,
        }
    }
}

/// `(n x p) x n = p - n (n . p)`: the radiating part of `p` seen along `n`.
fn transverse(p: &[f64; 3], n: &[f64; 3]) -> [f64; 3] {
    let d = p[0] * n[0] + p[1] * n[1] + p[2] * n[2];
    [p[0] - d * n[0], p[1] - d * n[1], p[2] - d * n[2]]
}

impl FarFieldOracle {
    pub fn new(settings: QuadratureSettings) -> Result<Self> {
        if settings.nodes == 0 {
            return Err(Error::OutOfRange {
                name: "nodes",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        Ok(Self {
            settings,
            coarse: SphereRule::new(settings.nodes, settings.scheme),
            fine: SphereRule::new(2 * settings.nodes, settings.scheme),
        })
    }

    pub fn settings(&self) -> &QuadratureSettings {
        &self.settings
    }

    /// Powers at the configured node count, without the doubling check.
    pub fn powers(&self, config: &ImagePairConfig) -> PairPowers {
        self.coarse.powers(config)
    }

    fn converged<F: Fn(&PairPowers) -> f64>(&self, config: &ImagePairConfig, f: F) -> Result<f64> {
        let coarse = f(&self.coarse.powers(config));
        let fine = f(&self.fine.powers(config));
        let change = (fine - coarse).abs();
        if !(change <= self.settings.tolerance) {
            return Err(Error::QuadratureNotConverged {
                nodes: self.settings.nodes,
                change,
                tolerance: self.settings.tolerance,
            });
        }
        Ok(coarse)
    }

    /// Power supplied by the real dipole of the pair, relative to an isolated dipole.
    pub fn pair_power_ratio(&self, config: &ImagePairConfig) -> Result<f64> {
        self.converged(config, PairPowers::emitter_share)
    }

    /// Total radiated power of the pair, relative to an isolated dipole.
    pub fn pair_total_power_ratio(&self, config: &ImagePairConfig) -> Result<f64> {
        self.converged(config, PairPowers::total)
    }

    /// Orientation-weighted mix of the parallel and perpendicular pair ratios.
    pub fn relative_decay(&self, u: f64, mu: f64, xi: f64) -> Result<f64> {
        ensure_in("mu", mu, 0.0, 1.0, "[0, 1]")?;
        let xi = MirrorParameter::new(ensure_in("xi", xi, 0.0, XI_MAX, "[0, 1.5]")?)?;
        let par = ImagePairConfig::from_mirror_parameter(u, xi, Orientation::ParallelToMirror)?;
        let perp =
            ImagePairConfig::from_mirror_parameter(u, xi, Orientation::PerpendicularToMirror)?;
        // Same as (1 - mu) par + mu perp, but exactly 1 when both are.
        let par = self.pair_power_ratio(&par)?;
        let perp = self.pair_power_ratio(&perp)?;
        Ok(par + mu * (perp - par))
    }
}

pub fn pair_power_ratio(config: &ImagePairConfig, settings: &QuadratureSettings) -> Result<f64> {
    FarFieldOracle::new(*settings)?.pair_power_ratio(config)
}

pub fn oracle_relative_decay(
    u: f64,
    mu: f64,
    xi: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    FarFieldOracle::new(*settings)?.relative_decay(u, mu, xi)
}
