//! Run configuration: a TOML document whose every key is optional.
//!
//! ```toml
//! mu = [0.0, 1.0]
//! tolerance = 1e-8
//!
//! [mirror]
//! pairs = [[0.6, 0.8]]        # (r_a, r_b)
//! xi = [0.75, 1.5]            # direct mirror parameters (sweeps only)
//! phases = [3.141592653589793, 0.0, 0.0, 0.0]
//!
//! [grid]                      # k x for decay-sweep, u for oracle-check
//! start = 0.0
//! stop = 10.0
//! count = 201
//! spacing = "linear"          # or "log"
//!
//! [output]
//! path = "sweep.csv"
//! format = "csv"              # or "json"
//! ```
//!
//! Command-line flags override values read from the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use semimirror::mirror::{MirrorSpec, Phases, XI_MAX};
use semimirror::oracle::{
    QuadratureScheme, QuadratureSettings, DEFAULT_CONVERGENCE_TOLERANCE, DEFAULT_NODES,
};
use semimirror::wavepacket::{Domain, GaussianEnvelope, Side, WavePacket};

use crate::error::{CliError, CliResult};

pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_XI_MAP_RESOLUTION: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    XiMap,
    DecaySweep,
    OracleCheck,
    ScatterDemo,
    Validate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub mirror: MirrorSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub xi_map: XiMapSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scatter: Option<ScatterScenario>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<[f64; 4]>,
    /// Explicit transmittances, for checking hand-entered descriptors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn check(&self) -> CliResult<()> {
        if self.count < 2 {
            return Err(CliError::Config(format!(
                "grid count must be at least 2, got {}",
                self.count
            )));
        }
        if !(self.start >= 0.0 && self.stop > self.start && self.stop.is_finite()) {
            return Err(CliError::Config(format!(
                "grid needs 0 <= start < stop, got start = {}, stop = {}",
                self.start, self.stop
            )));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(CliError::Config("log-spaced grids need start > 0".into()));
        }
        Ok(())
    }

    /// Grid points; both endpoints are included exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.count - 1 {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => {
                        (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<QuadratureScheme>,
    /// Allowed change under node doubling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_tolerance: Option<f64>,
}

impl QuadratureSection {
    pub fn settings(&self) -> CliResult<QuadratureSettings> {
        let settings = QuadratureSettings {
            nodes: self.nodes.unwrap_or(DEFAULT_NODES),
            scheme: self.scheme.unwrap_or(QuadratureScheme::GaussLegendre),
            tolerance: self
                .convergence_tolerance
                .unwrap_or(DEFAULT_CONVERGENCE_TOLERANCE),
        };
        if settings.nodes == 0 {
            return Err(CliError::Config(
                "quadrature needs at least one node".into(),
            ));
        }
        Ok(settings)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiMapSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

/// Wave-packet scattering scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterScenario {
    #[serde(default = "ScatterScenario::default_points")]
    pub points_per_side: usize,
    #[serde(default = "ScatterScenario::default_dx")]
    pub dx: f64,
    #[serde(default = "ScatterScenario::default_speed")]
    pub wave_speed: f64,
    #[serde(default = "ScatterScenario::default_carrier")]
    pub carrier: f64,
    pub final_time: f64,
    pub packets: Vec<PacketSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshot_times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub side: Side,
    pub center: f64,
    #[serde(default = "PacketSpec::default_width")]
    pub width: f64,
    #[serde(default = "PacketSpec::default_energy")]
    pub energy: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub emitted_at: f64,
}

impl PacketSpec {
    fn default_width() -> f64 {
        1.0
    }

    fn default_energy() -> f64 {
        1.0
    }
}

impl ScatterScenario {
    fn default_points() -> usize {
        1024
    }

    fn default_dx() -> f64 {
        0.05
    }

    fn default_speed() -> f64 {
        1.0
    }

    fn default_carrier() -> f64 {
        std::f64::consts::TAU
    }

    /// Two equal unit packets meeting at the mirror.
    pub fn symmetric_pair() -> Self {
        let packet = |side, center| PacketSpec {
            side,
            center,
            width: 1.0,
            energy: 1.0,
            phase: 0.0,
            emitted_at: 0.0,
        };
        Self {
            points_per_side: Self::default_points(),
            dx: Self::default_dx(),
            wave_speed: Self::default_speed(),
            carrier: Self::default_carrier(),
            final_time: 30.0,
            packets: vec![packet(Side::A, 15.0), packet(Side::B, -15.0)],
            snapshot_times: Vec::new(),
            snapshot_dir: None,
        }
    }

    pub fn domain(&self) -> CliResult<Domain> {
        Ok(Domain::new(self.points_per_side, self.dx, self.wave_speed)?)
    }

    /// Builds the side-a and side-b packets.
    pub fn packets(&self) -> CliResult<(Option<WavePacket>, Option<WavePacket>)> {
        let domain = self.domain()?;
        let (mut a, mut b) = (None, None);
        for spec in &self.packets {
            let env = GaussianEnvelope {
                center: spec.center,
                width: spec.width,
                energy: spec.energy,
                phase: spec.phase,
            };
            let packet = WavePacket::gaussian(domain, env, self.carrier, spec.side)?
                .with_emission_time(spec.emitted_at);
            let slot = match spec.side {
                Side::A => &mut a,
                Side::B => &mut b,
            };
            if slot.replace(packet).is_some() {
                return Err(CliError::Config(format!(
                    "more than one packet on side {:?}",
                    spec.side
                )));
            }
        }
        if a.is_none() && b.is_none() {
            return Err(CliError::Config("scenario declares no packets".into()));
        }
        Ok((a, b))
    }
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }

    pub fn phases(&self) -> Phases {
        self.mirror.phases.map(Phases::from).unwrap_or_default()
    }

    pub fn mu_values(&self, default: &[f64]) -> CliResult<Vec<f64>> {
        let mus = self.mu.clone().unwrap_or_else(|| default.to_vec());
        if mus.is_empty() {
            return Err(CliError::Config("mu list is empty".into()));
        }
        if let Some(bad) = mus.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(CliError::Config(format!("mu = {bad} is outside [0, 1]")));
        }
        Ok(mus)
    }

    pub fn reflectance_pairs(&self) -> CliResult<Vec<[f64; 2]>> {
        let pairs = self.mirror.pairs.clone().unwrap_or_default();
        if let Some(bad) = pairs.iter().flatten().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(CliError::Config(format!(
                "reflectance {bad} is outside [0, 1]"
            )));
        }
        Ok(pairs)
    }

    /// Direct `xi` values followed by those derived from reflectance pairs.
    pub fn xi_values(&self, default: &[f64]) -> CliResult<Vec<f64>> {
        let mut xis = self.mirror.xi.clone().unwrap_or_default();
        xis.extend(self.reflectance_pairs()?.iter().map(|&[ra, rb]| {
            semimirror::mirror::MirrorParameter::from_reflectances(ra, rb).value()
        }));
        if xis.is_empty() {
            xis = default.to_vec();
        }
        if let Some(bad) = xis.iter().find(|x| !(0.0..=XI_MAX).contains(*x)) {
            return Err(CliError::Config(format!("xi = {bad} is outside [0, 1.5]")));
        }
        Ok(xis)
    }

    pub fn grid_or(&self, default: GridSpec) -> CliResult<GridSpec> {
        let grid = self.grid.unwrap_or(default);
        grid.check()?;
        Ok(grid)
    }

    /// Mirror descriptors as entered, without enforcing the constraints.
    pub fn raw_mirrors(&self) -> Vec<MirrorSpec> {
        let phases = self.phases();
        let complement = |r: f64| ((1.0 - r) * (1.0 + r)).max(0.0).sqrt();
        self.mirror
            .pairs
            .iter()
            .flatten()
            .map(|&[r_a, r_b]| MirrorSpec {
                r_a,
                r_b,
                t_a: self.mirror.t_a.unwrap_or_else(|| complement(r_a)),
                t_b: self.mirror.t_b.unwrap_or_else(|| complement(r_b)),
                phases,
            })
            .collect()
    }
}
