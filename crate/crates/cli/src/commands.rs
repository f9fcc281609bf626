//! The five subcommands. Each `*_rows` function computes its table without
//! touching the filesystem; `run_*` adds output and a pass/fail outcome.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use semimirror::decay::relative_decay_rate;
use semimirror::mirror::{Constraint, MirrorParameter, MirrorSpec};
use semimirror::oracle::FarFieldOracle;
use semimirror::wavepacket::{energy_audit, scatter, EnergyLedger, FieldState};

use crate::config::{
    GridSpec, ScatterScenario, SweepConfig, DEFAULT_ORACLE_TOLERANCE, DEFAULT_XI_MAP_RESOLUTION,
};
use crate::error::{CliError, CliResult};
use crate::output::{emit, fmt_num, Record};

/// Result of a subcommand: whether it passed and a one-line summary for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

impl Outcome {
    fn pass(summary: String) -> Self {
        Self {
            passed: true,
            summary,
        }
    }
}

pub const DEFAULT_SWEEP_XI: &[f64] = &[0.75, 1.5];
pub const DEFAULT_SWEEP_MU: &[f64] = &[0.0, 1.0];
pub const DEFAULT_ORACLE_MU: &[f64] = &[0.0, 0.5, 1.0];

pub fn default_sweep_grid() -> GridSpec {
    GridSpec::linear(0.0, 10.0, 201)
}

pub fn default_oracle_grid() -> GridSpec {
    GridSpec::log(0.1, 50.0, 40)
}

// xi-map

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiRow {
    pub r_a: f64,
    pub r_b: f64,
    pub xi: f64,
}

impl Record for XiRow {
    const HEADER: &'static [&'static str] = &["r_a", "r_b", "xi"];
    fn fields(&self) -> Vec<String> {
        vec![fmt_num(self.r_a), fmt_num(self.r_b), fmt_num(self.xi)]
    }
}

/// `xi` over a `resolution x resolution` grid of `[0, 1]^2`, `r_a` varying slowest.
pub fn xi_map_rows(resolution: usize) -> CliResult<Vec<XiRow>> {
    if resolution < 2 {
        return Err(CliError::Config(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let step = |i: usize| i as f64 / (resolution - 1) as f64;
    Ok((0..resolution)
        .flat_map(|i| {
            (0..resolution).map(move |j| {
                let (r_a, r_b) = (step(i), step(j));
                XiRow {
                    r_a,
                    r_b,
                    xi: MirrorParameter::from_reflectances(r_a, r_b).value(),
                }
            })
        })
        .collect())
}

pub fn run_xi_map(cfg: &SweepConfig) -> CliResult<Outcome> {
    let resolution = cfg.xi_map.resolution.unwrap_or(DEFAULT_XI_MAP_RESOLUTION);
    let rows = xi_map_rows(resolution)?;
    emit(&rows, cfg.format(), cfg.output.path.as_deref())?;
    let max = rows.iter().map(|r| r.xi).fold(0.0, f64::max);
    Ok(Outcome::pass(format!(
        "{} rows, max xi = {}",
        rows.len(),
        fmt_num(max)
    )))
}

// decay-sweep

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub xi: f64,
    pub mu: f64,
    pub kx: f64,
    pub u: f64,
    pub ratio: f64,
}

impl Record for DecayRow {
    const HEADER: &'static [&'static str] = &["xi", "mu", "kx", "u", "ratio"];
    fn fields(&self) -> Vec<String> {
        [self.xi, self.mu, self.kx, self.u, self.ratio]
            .into_iter()
            .map(fmt_num)
            .collect()
    }
}

/// Rows for every `(xi, mu, kx)` combination, `kx` varying fastest.
pub fn decay_sweep_rows(cfg: &SweepConfig) -> CliResult<Vec<DecayRow>> {
    let xis = cfg.xi_values(DEFAULT_SWEEP_XI)?;
    let mus = cfg.mu_values(DEFAULT_SWEEP_MU)?;
    let grid = cfg.grid_or(default_sweep_grid())?.points();
    let mut combos = Vec::with_capacity(xis.len() * mus.len() * grid.len());
    for &xi in &xis {
        for &mu in &mus {
            combos.extend(grid.iter().map(|&kx| (xi, mu, kx)));
        }
    }
    combos
        .into_par_iter()
        .map(|(xi, mu, kx)| {
            let u = 2.0 * kx;
            let ratio = relative_decay_rate(u, mu, xi)?;
            Ok(DecayRow {
                xi,
                mu,
                kx,
                u,
                ratio,
            })
        })
        .collect()
}

pub fn run_decay_sweep(cfg: &SweepConfig) -> CliResult<Outcome> {
    let rows = decay_sweep_rows(cfg)?;
    emit(&rows, cfg.format(), cfg.output.path.as_deref())?;
    Ok(Outcome::pass(format!("{} rows", rows.len())))
}

// oracle-check

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub u: f64,
    pub mu: f64,
    pub xi: f64,
    pub closed_form: f64,
    /// NaN when the quadrature failed to converge.
    pub oracle: f64,
    pub abs_diff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl OracleRow {
    pub fn within(&self, tolerance: f64) -> bool {
        self.error.is_none() && self.abs_diff <= tolerance
    }
}

impl Record for OracleRow {
    const HEADER: &'static [&'static str] = &["u", "mu", "xi", "closed_form", "oracle", "abs_diff"];
    fn fields(&self) -> Vec<String> {
        [
            self.u,
            self.mu,
            self.xi,
            self.closed_form,
            self.oracle,
            self.abs_diff,
        ]
        .into_iter()
        .map(fmt_num)
        .collect()
    }
}

/// Closed form against quadrature for every `(u, mu, xi)`, `xi` varying fastest.
pub fn oracle_rows(cfg: &SweepConfig) -> CliResult<Vec<OracleRow>> {
    let xis = cfg.xi_values(DEFAULT_SWEEP_XI)?;
    let mus = cfg.mu_values(DEFAULT_ORACLE_MU)?;
    let us = cfg.grid_or(default_oracle_grid())?.points();
    let oracle = FarFieldOracle::new(cfg.quadrature.settings()?)?;
    let mut combos = Vec::with_capacity(us.len() * mus.len() * xis.len());
    for &u in &us {
        for &mu in &mus {
            combos.extend(xis.iter().map(|&xi| (u, mu, xi)));
        }
    }
    combos
        .into_par_iter()
        .map(|(u, mu, xi)| {
            let closed_form = relative_decay_rate(u, mu, xi)?;
            let row = match oracle.relative_decay(u, mu, xi) {
                Ok(value) => OracleRow {
                    u,
                    mu,
                    xi,
                    closed_form,
                    oracle: value,
                    abs_diff: (value - closed_form).abs(),
                    error: None,
                },
                Err(e @ semimirror::Error::QuadratureNotConverged { .. }) => OracleRow {
                    u,
                    mu,
                    xi,
                    closed_form,
                    oracle: f64::NAN,
                    abs_diff: f64::NAN,
                    error: Some(e.to_string()),
                },
                Err(e) => return Err(e.into()),
            };
            Ok(row)
        })
        .collect()
}

pub fn run_oracle_check(cfg: &SweepConfig) -> CliResult<Outcome> {
    let tolerance = cfg.tolerance.unwrap_or(DEFAULT_ORACLE_TOLERANCE);
    let rows = oracle_rows(cfg)?;
    emit(&rows, cfg.format(), cfg.output.path.as_deref())?;
    let failures = rows.iter().filter(|r| !r.within(tolerance)).count();
    let max_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    Ok(Outcome {
        passed: failures == 0,
        summary: format!(
            "{} points, max |closed form - oracle| = {}, {} above tolerance {}",
            rows.len(),
            fmt_num(max_diff),
            failures,
            fmt_num(tolerance)
        ),
    })
}

// validate

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationRow {
    pub r_a: f64,
    pub r_b: f64,
    pub constraint: Constraint,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Record for ValidationRow {
    const HEADER: &'static [&'static str] = &[
        "r_a",
        "r_b",
        "constraint",
        "residual",
        "tolerance",
        "passed",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_num(self.r_a),
            fmt_num(self.r_b),
            self.constraint.name().to_string(),
            fmt_num(self.residual),
            fmt_num(self.tolerance),
            self.passed.to_string(),
        ]
    }
}

pub fn validation_rows(mirrors: &[MirrorSpec]) -> Vec<ValidationRow> {
    mirrors
        .iter()
        .flat_map(|m| {
            m.validate().checks.into_iter().map(move |c| ValidationRow {
                r_a: m.r_a,
                r_b: m.r_b,
                constraint: c.constraint,
                residual: c.residual,
                tolerance: c.tolerance,
                passed: c.passed,
            })
        })
        .collect()
}

fn configured_mirrors(cfg: &SweepConfig) -> CliResult<Vec<MirrorSpec>> {
    let mirrors = cfg.raw_mirrors();
    if mirrors.is_empty() {
        return Err(CliError::Config(
            "no mirror given: set [mirror] pairs or --ra/--rb".into(),
        ));
    }
    Ok(mirrors)
}

pub fn run_validate(cfg: &SweepConfig) -> CliResult<Outcome> {
    let rows = validation_rows(&configured_mirrors(cfg)?);
    emit(&rows, cfg.format(), cfg.output.path.as_deref())?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} (residual {})", r.constraint, fmt_num(r.residual)))
        .collect();
    Ok(if failed.is_empty() {
        Outcome::pass(format!("{} constraints satisfied", rows.len()))
    } else {
        Outcome {
            passed: false,
            summary: format!("violated: {}", failed.join(", ")),
        }
    })
}

// scatter-demo

impl Record for EnergyLedger {
    const HEADER: &'static [&'static str] = &[
        "input_a",
        "input_b",
        "output_a",
        "output_b",
        "balance",
        "relative_imbalance",
    ];
    fn fields(&self) -> Vec<String> {
        [
            self.input_a,
            self.input_b,
            self.output_a,
            self.output_b,
            self.balance,
            self.relative_imbalance,
        ]
        .into_iter()
        .map(fmt_num)
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnapshotRow {
    pub x: f64,
    pub re: f64,
    pub im: f64,
    pub intensity: f64,
}

impl Record for SnapshotRow {
    const HEADER: &'static [&'static str] = &["x", "re", "im", "intensity"];
    fn fields(&self) -> Vec<String> {
        [self.x, self.re, self.im, self.intensity]
            .into_iter()
            .map(fmt_num)
            .collect()
    }
}

pub fn snapshot_rows(state: &FieldState) -> Vec<SnapshotRow> {
    state
        .points()
        .map(|(x, e)| SnapshotRow {
            x,
            re: e.re,
            im: e.im,
            intensity: e.norm_sqr(),
        })
        .collect()
}

/// Report of a scattering run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterReport {
    pub mirror: MirrorSpec,
    pub ledger: EnergyLedger,
    pub snapshots: Vec<FieldState>,
}

/// Runs the scenario. A mirror that fails validation is refused unless `force` is set.
pub fn scatter_report(cfg: &SweepConfig, force: bool) -> CliResult<Result<ScatterReport, Outcome>> {
    let scenario = cfg
        .scatter
        .clone()
        .unwrap_or_else(ScatterScenario::symmetric_pair);
    let mirror = *configured_mirrors(cfg)?
        .first()
        .expect("configured_mirrors is non-empty");
    let report = mirror.validate();
    if !report.all_passed() && !force {
        let failed: Vec<String> = report
            .failures()
            .map(|c| c.constraint.to_string())
            .collect();
        return Ok(Err(Outcome {
            passed: false,
            summary: format!(
                "mirror fails validation ({}); rerun with --force to proceed",
                failed.join(", ")
            ),
        }));
    }
    run_scenario(&scenario, &mirror).map(Ok)
}

fn run_scenario(scenario: &ScatterScenario, mirror: &MirrorSpec) -> CliResult<ScatterReport> {
    let (a, b) = scenario.packets()?;
    let ledger = energy_audit(a.as_ref(), b.as_ref(), mirror, scenario.final_time)?;
    let times = match (&scenario.snapshot_dir, scenario.snapshot_times.is_empty()) {
        (Some(_), true) => vec![0.0, 0.5 * scenario.final_time, scenario.final_time],
        _ => scenario.snapshot_times.clone(),
    };
    let snapshots = times
        .iter()
        .map(|&t| scatter(a.as_ref(), b.as_ref(), mirror, t).map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ScatterReport {
        mirror: *mirror,
        ledger,
        snapshots,
    })
}

fn snapshot_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("snapshot_{index:03}.csv"))
}

pub fn run_scatter_demo(cfg: &SweepConfig, force: bool) -> CliResult<Outcome> {
    let report = match scatter_report(cfg, force)? {
        Ok(report) => report,
        Err(refused) => return Ok(refused),
    };
    emit(&[report.ledger], cfg.format(), cfg.output.path.as_deref())?;
    if let Some(dir) = cfg.scatter.as_ref().and_then(|s| s.snapshot_dir.as_ref()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (i, state) in report.snapshots.iter().enumerate() {
            emit(
                &snapshot_rows(state),
                crate::config::Format::Csv,
                Some(&snapshot_path(dir, i)),
            )?;
        }
    }
    let l = report.ledger;
    // The imbalance is a result, not a failure.
    Ok(Outcome::pass(format!(
        "in {} / out {}, relative imbalance {}",
        fmt_num(l.input_total()),
        fmt_num(l.output_total()),
        fmt_num(l.relative_imbalance)
    )))
}
