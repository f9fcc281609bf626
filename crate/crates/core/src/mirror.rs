//! Two-sided semi-transparent mirror.
//!
//! Side `a` is the half-space `x >= 0` (where the emitter sits), side `b` is
//! `x < 0`. Amplitudes are real, non-negative fractions; scattering phases are
//! carried separately as four angles:
//!
//! | channel                | amplitude | phase   |
//! |------------------------|-----------|---------|
//! | a reflected back to a  | `r_a`     | `phi_1` |
//! | b transmitted into a   | `t_b`     | `phi_2` |
//! | b reflected back to b  | `r_b`     | `phi_3` |
//! | a transmitted into b   | `t_a`     | `phi_4` |
//!
//! A lossless mirror needs `r^2 + t^2 = 1` on each side and
//! `phi_1 - phi_2 + phi_3 - phi_4` equal to an odd multiple of `pi`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_in, Error, Result};

/// Tolerance on `r^2 + t^2 = 1`.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-12;
/// Tolerance on the odd-multiple-of-pi phase condition, in radians.
pub const PHASE_TOLERANCE: f64 = 1e-9;

/// Largest value of the mirror parameter, reached for a perfect mirror.
pub const XI_MAX: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phases {
    pub phi_1: f64,
    pub phi_2: f64,
    pub phi_3: f64,
    pub phi_4: f64,
}

impl Phases {
    pub const fn new(phi_1: f64, phi_2: f64, phi_3: f64, phi_4: f64) -> Self {
        Self {
            phi_1,
            phi_2,
            phi_3,
            phi_4,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_1, self.phi_2, self.phi_3, self.phi_4]
    }

    /// `phi_1 - phi_2 + phi_3 - phi_4`.
    pub fn combination(&self) -> f64 {
        self.phi_1 - self.phi_2 + self.phi_3 - self.phi_4
    }

    /// Distance in radians from the combination to the nearest odd multiple of `pi`.
    pub fn condition_residual(&self) -> f64 {
        let m = (self.combination() - PI).rem_euclid(2.0 * PI);
        m.min(2.0 * PI - m)
    }
}

impl Default for Phases {
    /// `(pi, 0, 0, 0)`: only reflection on side `a` picks up a sign flip.
    fn default() -> Self {
        Self::new(PI, 0.0, 0.0, 0.0)
    }
}

impl From<[f64; 4]> for Phases {
    fn from(p: [f64; 4]) -> Self {
        Self::new(p[0], p[1], p[2], p[3])
    }
}

/// Amplitudes and phases of a two-sided mirror.
///
/// Fields are public so that arbitrary (possibly inconsistent) descriptors can
/// be inspected with [`MirrorSpec::validate`]. Use [`MirrorSpec::new`] to get
/// one that is guaranteed to satisfy both constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorSpec {
    pub r_a: f64,
    pub r_b: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub phases: Phases,
}

impl MirrorSpec {
    /// Builds a lossless mirror from its two reflectances, deriving the
    /// transmittances. `None` selects the default phase convention.
    pub fn new(r_a: f64, r_b: f64, phases: Option<Phases>) -> Result<Self> {
        ensure_in("r_a", r_a, 0.0, 1.0, "[0, 1]")?;
        ensure_in("r_b", r_b, 0.0, 1.0, "[0, 1]")?;
        let phases = phases.unwrap_or_default();
        let residual = phases.condition_residual();
        if !(residual <= PHASE_TOLERANCE) {
            return Err(Error::PhaseConditionViolated {
                sum: phases.combination(),
                residual,
            });
        }
        Ok(Self {
            r_a,
            r_b,
            t_a: complement(r_a),
            t_b: complement(r_b),
            phases,
        })
    }

    /// Symmetric mirror with `r_a = r_b = r`.
    pub fn symmetric(r: f64) -> Result<Self> {
        Self::new(r, r, None)
    }

    /// Relabels the two sides, turning a mirror seen from `a` into the same
    /// mirror seen from `b`.
    pub fn swapped(&self) -> Self {
        let p = self.phases;
        Self {
            r_a: self.r_b,
            r_b: self.r_a,
            t_a: self.t_b,
            t_b: self.t_a,
            phases: Phases::new(p.phi_3, p.phi_4, p.phi_1, p.phi_2),
        }
    }

    /// Checks every constraint and reports residuals. Never fails.
    pub fn validate(&self) -> ValidationReport {
        let range_residual = [self.r_a, self.r_b, self.t_a, self.t_b]
            .iter()
            .map(|&v| {
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    (0.0 - v).max(v - 1.0).max(0.0)
                }
            })
            .fold(0.0, f64::max);

        let checks = vec![
            ConstraintCheck::new(Constraint::AmplitudeRange, range_residual, 0.0),
            ConstraintCheck::new(
                Constraint::EnergySideA,
                (self.r_a * self.r_a + self.t_a * self.t_a - 1.0).abs(),
                AMPLITUDE_TOLERANCE,
            ),
            ConstraintCheck::new(
                Constraint::EnergySideB,
                (self.r_b * self.r_b + self.t_b * self.t_b - 1.0).abs(),
                AMPLITUDE_TOLERANCE,
            ),
            ConstraintCheck::new(
                Constraint::PhaseCondition,
                self.phases.condition_residual(),
                PHASE_TOLERANCE,
            ),
        ];
        ValidationReport { checks }
    }

    /// `eta_a^2 = 1 + r_a^2 / r_b^2`, `eta_b^2 = 1 + r_b^2 / r_a^2`.
    pub fn normalization_factors(&self) -> Result<NormalizationPair> {
        let (ra2, rb2) = self.reflectance_squares()?;
        Ok(NormalizationPair {
            eta_a: (1.0 + ra2 / rb2).sqrt(),
            eta_b: (1.0 + rb2 / ra2).sqrt(),
        })
    }

    /// Largest deviation from unity of the two normalisation sums
    /// `(1 + r_a^2)/eta_a^2 + t_b^2/eta_b^2` and `(1 + r_b^2)/eta_b^2 + t_a^2/eta_a^2`.
    pub fn normalization_identity_residual(&self) -> Result<f64> {
        let (ra2, rb2) = self.reflectance_squares()?;
        // Use the squared factors directly; going through sqrt and back costs an ulp.
        let eta_a2 = 1.0 + ra2 / rb2;
        let eta_b2 = 1.0 + rb2 / ra2;
        let ta2 = self.t_a * self.t_a;
        let tb2 = self.t_b * self.t_b;
        let side_a = (1.0 + ra2) / eta_a2 + tb2 / eta_b2 - 1.0;
        let side_b = (1.0 + rb2) / eta_b2 + ta2 / eta_a2 - 1.0;
        Ok(side_a.abs().max(side_b.abs()))
    }

    /// `xi = 3 r_a r_b^2 / (r_a^2 + r_b^2)`, taken as 0 when both reflectances vanish.
    pub fn mirror_parameter(&self) -> MirrorParameter {
        MirrorParameter::from_reflectances(self.r_a, self.r_b)
    }

    fn reflectance_squares(&self) -> Result<(f64, f64)> {
        match (self.r_a == 0.0, self.r_b == 0.0) {
            (true, true) => Err(Error::FreeSpaceDegenerate),
            (true, false) | (false, true) => Err(Error::OneSidedMirror {
                r_a: self.r_a,
                r_b: self.r_b,
            }),
            (false, false) => Ok((self.r_a * self.r_a, self.r_b * self.r_b)),
        }
    }
}

fn complement(r: f64) -> f64 {
    // (1 - r)(1 + r) keeps precision near r = 1.
    ((1.0 - r) * (1.0 + r)).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    /// All four amplitudes lie in `[0, 1]`.
    AmplitudeRange,
    /// `r_a^2 + t_a^2 = 1`.
    EnergySideA,
    /// `r_b^2 + t_b^2 = 1`.
    EnergySideB,
    /// `phi_1 - phi_2 + phi_3 - phi_4` is an odd multiple of `pi`.
    PhaseCondition,
}

impl Constraint {
    pub fn name(&self) -> &'static str {
        match self {
            Constraint::AmplitudeRange => "amplitude-range",
            Constraint::EnergySideA => "energy-side-a",
            Constraint::EnergySideB => "energy-side-b",
            Constraint::PhaseCondition => "phase-condition",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub constraint: Constraint,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ConstraintCheck {
    fn new(constraint: Constraint, residual: f64, tolerance: f64) -> Self {
        Self {
            constraint,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, constraint: Constraint) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| c.constraint == constraint)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationPair {
    pub eta_a: f64,
    pub eta_b: f64,
}

/// The single combination of reflectances that controls the decay-rate
/// modification. Always in `[0, 1.5]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MirrorParameter(f64);

impl MirrorParameter {
    pub const FREE_SPACE: Self = Self(0.0);
    pub const PERFECT_MIRROR: Self = Self(XI_MAX);

    /// Wraps a value supplied directly (e.g. a sweep over `xi`).
    pub fn new(xi: f64) -> Result<Self> {
        ensure_in("xi", xi, 0.0, XI_MAX, "[0, 1.5]").map(Self)
    }

    pub fn from_reflectances(r_a: f64, r_b: f64) -> Self {
        let denom = r_a * r_a + r_b * r_b;
        if denom == 0.0 {
            // Limit along r_a = r_b -> 0.
            return Self::FREE_SPACE;
        }
        Self(3.0 * r_a * r_b * r_b / denom)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Image-dipole amplitude `2 xi / 3` that reproduces this parameter.
    pub fn image_amplitude(self) -> f64 {
        2.0 * self.0 / 3.0
    }
}

impl From<MirrorParameter> for f64 {
    fn from(xi: MirrorParameter) -> f64 {
        xi.0
    }
}
