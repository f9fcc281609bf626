use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, GridSpec, Mode, Spacing, SweepConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "semimirror",
    version,
    about = "Dipole decay rates near two-sided semi-transparent mirrors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mirror parameter xi over the (r_a, r_b) unit square.
    XiMap {
        #[command(flatten)]
        common: CommonArgs,
        /// Points per axis.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Relative decay rate versus distance.
    DecaySweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Closed-form rate against far-field quadrature.
    OracleCheck {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Quadrature nodes per angular dimension.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Scatter wave packets off the mirror and audit the energy.
    ScatterDemo {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        mirror: MirrorArgs,
        /// Directory for field snapshot CSVs.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
    },
    /// Check a mirror descriptor against its constraints.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        mirror: MirrorArgs,
        #[arg(long)]
        t_a: Option<f64>,
        #[arg(long)]
        t_b: Option<f64>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Pass/fail tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Run even if the mirror fails validation.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MirrorArgs {
    #[arg(long, requires = "rb")]
    pub ra: Option<f64>,
    #[arg(long, requires = "ra")]
    pub rb: Option<f64>,
    /// Four phases phi_1..phi_4 in radians.
    #[arg(long, value_parser = parse_phases, allow_hyphen_values = true)]
    pub phases: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Comma-separated mirror parameters.
    #[arg(long, value_delimiter = ',')]
    pub xi: Option<Vec<f64>>,
    /// Comma-separated orientation parameters.
    #[arg(long, value_delimiter = ',')]
    pub mu: Option<Vec<f64>>,
    #[command(flatten)]
    pub mirror: MirrorArgs,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_parser = parse_spacing)]
    pub spacing: Option<Spacing>,
}

fn parse_phases(s: &str) -> Result<[f64; 4], String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated phases, got {}", v.len()))
}

fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        other => Err(format!(
            "unknown spacing {other:?} (expected linear or log)"
        )),
    }
}

impl CommonArgs {
    fn apply(&self, cfg: &mut SweepConfig) {
        if let Some(out) = &self.out {
            cfg.output.path = Some(out.clone());
        }
        if let Some(format) = self.format {
            cfg.output.format = Some(format);
        }
        if let Some(tol) = self.tolerance {
            cfg.tolerance = Some(tol);
        }
    }
}

impl MirrorArgs {
    fn apply(&self, cfg: &mut SweepConfig) {
        if let (Some(ra), Some(rb)) = (self.ra, self.rb) {
            cfg.mirror.pairs = Some(vec![[ra, rb]]);
        }
        if let Some(p) = &self.phases {
            cfg.mirror.phases = Some(*p);
        }
    }
}

impl SweepArgs {
    fn apply(&self, cfg: &mut SweepConfig, default_grid: GridSpec) {
        if let Some(xi) = &self.xi {
            cfg.mirror.xi = Some(xi.clone());
            // Explicit xi on the command line replaces file-supplied pairs.
            if self.mirror.ra.is_none() {
                cfg.mirror.pairs = None;
            }
        }
        if let Some(mu) = &self.mu {
            cfg.mu = Some(mu.clone());
        }
        self.mirror.apply(cfg);
        if self.start.is_some()
            || self.stop.is_some()
            || self.count.is_some()
            || self.spacing.is_some()
        {
            let mut grid = cfg.grid.unwrap_or(default_grid);
            grid.start = self.start.unwrap_or(grid.start);
            grid.stop = self.stop.unwrap_or(grid.stop);
            grid.count = self.count.unwrap_or(grid.count);
            grid.spacing = self.spacing.unwrap_or(grid.spacing);
            cfg.grid = Some(grid);
        }
    }
}

impl Command {
    pub fn mode(&self) -> Mode {
        match self {
            Command::XiMap { .. } => Mode::XiMap,
            Command::DecaySweep { .. } => Mode::DecaySweep,
            Command::OracleCheck { .. } => Mode::OracleCheck,
            Command::ScatterDemo { .. } => Mode::ScatterDemo,
            Command::Validate { .. } => Mode::Validate,
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::XiMap { common, .. }
            | Command::DecaySweep { common, .. }
            | Command::OracleCheck { common, .. }
            | Command::ScatterDemo { common, .. }
            | Command::Validate { common, .. } => common,
        }
    }

    /// Loads the config file (if any) and layers the flags on top.
    pub fn resolve_config(&self) -> CliResult<SweepConfig> {
        let common = self.common();
        let mut cfg = match &common.config {
            Some(path) => SweepConfig::from_file(path)?,
            None => SweepConfig::default(),
        };
        if let Some(mode) = cfg.mode {
            if mode != self.mode() {
                return Err(CliError::Config(format!(
                    "config file is for mode {mode:?}, but the {:?} subcommand was run",
                    self.mode()
                )));
            }
        }
        cfg.mode = Some(self.mode());
        common.apply(&mut cfg);
        match self {
            Command::XiMap { resolution, .. } => {
                if resolution.is_some() {
                    cfg.xi_map.resolution = *resolution;
                }
            }
            Command::DecaySweep { sweep, .. } => {
                sweep.apply(&mut cfg, crate::commands::default_sweep_grid())
            }
            Command::OracleCheck { sweep, nodes, .. } => {
                sweep.apply(&mut cfg, crate::commands::default_oracle_grid());
                if nodes.is_some() {
                    cfg.quadrature.nodes = *nodes;
                }
            }
            Command::ScatterDemo {
                mirror,
                snapshot_dir,
                ..
            } => {
                mirror.apply(&mut cfg);
                if let Some(dir) = snapshot_dir {
                    let scenario = cfg
                        .scatter
                        .get_or_insert_with(crate::config::ScatterScenario::symmetric_pair);
                    scenario.snapshot_dir = Some(dir.clone());
                }
            }
            Command::Validate {
                mirror, t_a, t_b, ..
            } => {
                mirror.apply(&mut cfg);
                if t_a.is_some() {
                    cfg.mirror.t_a = *t_a;
                }
                if t_b.is_some() {
                    cfg.mirror.t_b = *t_b;
                }
            }
        }
        Ok(cfg)
    }
}
