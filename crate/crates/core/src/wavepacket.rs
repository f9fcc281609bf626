//! One-dimensional mirror-image scattering of wave packets at normal incidence.
//!
//! A mirror at `x = 0` is never simulated directly. The field at time `t` is
//! assembled from free-space solutions only: on `x >= 0`
//!
//! ```text
//! E = A(x, t) + r_a e^{i phi_1} A(-x, t) + t_b e^{i phi_2} B(x, t)
//! ```
//!
//! and on `x < 0`
//!
//! ```text
//! E = B(x, t) + r_b e^{i phi_3} B(-x, t) + t_a e^{i phi_4} A(x, t)
//! ```
//!
//! where `A` and `B` are the freely propagated packets that started on side
//! `a` (`x >= 0`) and side `b` (`x < 0`). Free propagation is an exact
//! dispersionless translation.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mirror::MirrorSpec;

/// Samples with `|E| <= SUPPORT_THRESHOLD * max |E|` are outside a packet's support.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// Uniform grid symmetric about the mirror plane.
///
/// There are `points_per_side` samples on each side at `x_i = (i - N/2 + 1/2) dx`,
/// so the mirror map `x -> -x` sends index `i` to `N - 1 - i` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub points_per_side: usize,
    pub dx: f64,
    pub wave_speed: f64,
}

impl Domain {
    pub fn new(points_per_side: usize, dx: f64, wave_speed: f64) -> Result<Self> {
        if points_per_side == 0 {
            return Err(Error::OutOfRange {
                name: "points_per_side",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        for (name, value) in [("dx", dx), ("wave_speed", wave_speed)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    range: "(0, inf)",
                });
            }
        }
        Ok(Self {
            points_per_side,
            dx,
            wave_speed,
        })
    }

    pub fn len(&self) -> usize {
        2 * self.points_per_side
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.points_per_side as f64 + 0.5) * self.dx
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.x(i))
    }

    pub fn mirror_index(&self, i: usize) -> usize {
        self.len() - 1 - i
    }

    /// Index of the first sample with `x >= 0`.
    pub fn first_a_index(&self) -> usize {
        self.points_per_side
    }

    pub fn side_of(&self, i: usize) -> Side {
        if i >= self.first_a_index() {
            Side::A
        } else {
            Side::B
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `x >= 0`
    A,
    /// `x < 0`
    B,
}

impl Side {
    /// Direction of travel toward the mirror from this side.
    pub fn incoming(self) -> Direction {
        match self {
            Side::A => Direction::Left,
            Side::B => Direction::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Left => -1.0,
            Direction::Right => 1.0,
        }
    }
}

/// Gaussian envelope `sqrt(E) g(x - center) e^{i phase}`, with `g` normalised on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianEnvelope {
    pub center: f64,
    pub width: f64,
    pub energy: f64,
    #[serde(default)]
    pub phase: f64,
}

/// A freely propagating packet.
///
/// `samples` holds the full complex field (envelope times carrier) at time
/// `emitted_at`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    domain: Domain,
    samples: Vec<Complex64>,
    carrier: f64,
    direction: Direction,
    side: Side,
    emitted_at: f64,
}

impl WavePacket {
    pub fn from_samples(
        domain: Domain,
        samples: Vec<Complex64>,
        carrier: f64,
        direction: Direction,
        side: Side,
        emitted_at: f64,
    ) -> Result<Self> {
        if samples.len() != domain.len() {
            return Err(Error::InvalidPacket(format!(
                "{} samples for a grid of {}",
                samples.len(),
                domain.len()
            )));
        }
        if !emitted_at.is_finite() {
            return Err(Error::InvalidPacket("emission time must be finite".into()));
        }
        let packet = Self {
            domain,
            samples,
            carrier,
            direction,
            side,
            emitted_at,
        };
        let energy = packet.energy();
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidPacket(format!(
                "energy {energy} is not finite and positive"
            )));
        }
        Ok(packet)
    }

    /// Gaussian packet heading toward the mirror from `side`, carrying `carrier`
    /// in its direction of travel and normalised to `envelope.energy` on the grid.
    pub fn gaussian(
        domain: Domain,
        envelope: GaussianEnvelope,
        carrier: f64,
        side: Side,
    ) -> Result<Self> {
        if !(envelope.width > 0.0 && envelope.energy > 0.0) {
            return Err(Error::InvalidPacket(
                "width and energy must be positive".into(),
            ));
        }
        let direction = side.incoming();
        let k = direction.sign() * carrier;
        let mut samples: Vec<Complex64> = domain
            .positions()
            .map(|x| {
                let d = (x - envelope.center) / envelope.width;
                Complex64::from_polar((-0.5 * d * d).exp(), k * x + envelope.phase)
            })
            .collect();
        let norm: f64 = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * domain.dx;
        let scale = (envelope.energy / norm).sqrt();
        samples.iter_mut().for_each(|s| *s *= scale);
        Self::from_samples(domain, samples, carrier, direction, side, 0.0)
    }

    pub fn with_emission_time(mut self, emitted_at: f64) -> Self {
        self.emitted_at = emitted_at;
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn emitted_at(&self) -> f64 {
        self.emitted_at
    }

    /// `sum |E|^2 dx`.
    pub fn energy(&self) -> f64 {
        energy_of(&self.samples, self.domain.dx)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&s| s * factor).collect(),
            ..self.clone()
        }
    }

    /// Index range `[lo, hi]` of significant samples.
    pub fn support(&self) -> Option<(usize, usize)> {
        support_of(&self.samples)
    }

    /// Advances the packet by `dt >= 0`.
    pub fn propagate_free(&self, dt: f64) -> Result<Self> {
        if !(dt >= 0.0) {
            return Err(Error::OutOfRange {
                name: "t",
                value: dt,
                range: "[0, inf)",
            });
        }
        Ok(Self {
            samples: self.shifted_samples(dt)?,
            emitted_at: self.emitted_at + dt,
            ..self.clone()
        })
    }

    /// Free-space field at absolute time `t` (may precede the emission time).
    pub fn free_field_at(&self, t: f64) -> Result<Vec<Complex64>> {
        self.shifted_samples(t - self.emitted_at)
    }

    fn shifted_samples(&self, dt: f64) -> Result<Vec<Complex64>> {
        let shift = self.direction.sign() * self.domain.wave_speed * dt / self.domain.dx;
        if let Some((lo, hi)) = self.support() {
            let n = self.domain.len() as f64;
            if lo as f64 + shift < 0.0 || hi as f64 + shift > n - 1.0 {
                return Err(Error::GridOverrun { shift });
            }
        }
        Ok(translate(&self.samples, shift))
    }
}

fn energy_of(samples: &[Complex64], dx: f64) -> f64 {
    samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * dx
}

fn support_of(samples: &[Complex64]) -> Option<(usize, usize)> {
    let peak = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return None;
    }
    let cut = SUPPORT_THRESHOLD * peak;
    let lo = samples.iter().position(|s| s.norm() > cut)?;
    let hi = samples.iter().rposition(|s| s.norm() > cut)?;
    Some((lo, hi))
}

/// Translates sampled data by `shift` grid spacings (positive moves toward
/// larger indices). Integer shifts move samples; other shifts apply the
/// band-limited phase ramp in Fourier space, which preserves the norm.
fn translate(samples: &[Complex64], shift: f64) -> Vec<Complex64> {
    let n = samples.len();
    let rounded = shift.round();
    if (shift - rounded).abs() < 1e-9 {
        let m = rounded as i64;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &s) in samples.iter().enumerate() {
            let j = i as i64 + m;
            if (0..n as i64).contains(&j) {
                out[j as usize] = s;
            }
        }
        return out;
    }

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf = samples.to_vec();
    forward.process(&mut buf);
    let nf = n as f64;
    for (m, v) in buf.iter_mut().enumerate() {
        let freq = if m < n / 2 { m as f64 } else { m as f64 - nf };
        *v *= Complex64::from_polar(1.0 / nf, -std::f64::consts::TAU * freq * shift / nf);
    }
    inverse.process(&mut buf);
    buf
}

/// Complex field over the whole grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub domain: Domain,
    pub samples: Vec<Complex64>,
    pub time: f64,
}

impl FieldState {
    pub fn zeros(domain: Domain, time: f64) -> Self {
        Self {
            domain,
            samples: vec![Complex64::new(0.0, 0.0); domain.len()],
            time,
        }
    }

    pub fn total_energy(&self) -> f64 {
        energy_of(&self.samples, self.domain.dx)
    }

    /// Energy on `x >= 0` and on `x < 0`.
    pub fn side_energies(&self) -> (f64, f64) {
        let (b, a) = self.samples.split_at(self.domain.first_a_index());
        (energy_of(a, self.domain.dx), energy_of(b, self.domain.dx))
    }

    /// `(x, E)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &e)| (self.domain.x(i), e))
    }
}

pub fn total_energy(state: &FieldState) -> f64 {
    state.total_energy()
}

fn check_incoming(packet: &WavePacket, side: Side) -> Result<()> {
    if packet.side != side {
        return Err(Error::SideMismatch(format!(
            "packet labelled {:?} supplied for side {:?}",
            packet.side, side
        )));
    }
    if packet.direction != side.incoming() {
        return Err(Error::SideMismatch(format!(
            "side {:?} packet must travel {:?}",
            side,
            side.incoming()
        )));
    }
    let (lo, hi) = packet.support().expect("packets have positive energy");
    let first_a = packet.domain.first_a_index();
    let on_side = match side {
        Side::A => lo >= first_a,
        Side::B => hi < first_a,
    };
    if !on_side {
        return Err(Error::SideMismatch(format!(
            "side {:?} packet has support on [{}, {}]",
            side,
            packet.domain.x(lo),
            packet.domain.x(hi)
        )));
    }
    Ok(())
}

fn common_domain(a: Option<&WavePacket>, b: Option<&WavePacket>) -> Result<Domain> {
    match (a, b) {
        (None, None) => Err(Error::NoPackets),
        (Some(p), None) | (None, Some(p)) => Ok(p.domain),
        (Some(p), Some(q)) if p.domain == q.domain => Ok(p.domain),
        _ => Err(Error::GridMismatch),
    }
}

/// Field at time `t` produced by the two incoming packets and the mirror.
pub fn scatter(
    packet_a: Option<&WavePacket>,
    packet_b: Option<&WavePacket>,
    mirror: &MirrorSpec,
    t: f64,
) -> Result<FieldState> {
    let domain = common_domain(packet_a, packet_b)?;
    let zeros = || vec![Complex64::new(0.0, 0.0); domain.len()];
    let free_a = match packet_a {
        Some(p) => {
            check_incoming(p, Side::A)?;
            p.free_field_at(t)?
        }
        None => zeros(),
    };
    let free_b = match packet_b {
        Some(p) => {
            check_incoming(p, Side::B)?;
            p.free_field_at(t)?
        }
        None => zeros(),
    };

    let ph = mirror.phases;
    let refl_a = Complex64::from_polar(mirror.r_a, ph.phi_1);
    let trans_b = Complex64::from_polar(mirror.t_b, ph.phi_2);
    let refl_b = Complex64::from_polar(mirror.r_b, ph.phi_3);
    let trans_a = Complex64::from_polar(mirror.t_a, ph.phi_4);

    let samples = (0..domain.len())
        .map(|i| {
            let m = domain.mirror_index(i);
            match domain.side_of(i) {
                Side::A => free_a[i] + refl_a * free_a[m] + trans_b * free_b[i],
                Side::B => free_b[i] + refl_b * free_b[m] + trans_a * free_a[i],
            }
        })
        .collect();
    Ok(FieldState {
        domain,
        samples,
        time: t,
    })
}

/// Energy bookkeeping before and after scattering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub input_a: f64,
    pub input_b: f64,
    pub output_a: f64,
    pub output_b: f64,
    /// Input total minus output total; attributed to the mirror.
    pub balance: f64,
    pub relative_imbalance: f64,
}

impl EnergyLedger {
    pub fn input_total(&self) -> f64 {
        self.input_a + self.input_b
    }

    pub fn output_total(&self) -> f64 {
        self.output_a + self.output_b
    }
}

/// Scatters the packets up to `t_final` and compares incoming with outgoing energy.
pub fn energy_audit(
    packet_a: Option<&WavePacket>,
    packet_b: Option<&WavePacket>,
    mirror: &MirrorSpec,
    t_final: f64,
) -> Result<EnergyLedger> {
    let domain = common_domain(packet_a, packet_b)?;
    let first_a = domain.first_a_index();
    // Every free packet must have crossed the plane by t_final.
    if let Some(p) = packet_a {
        if matches!(support_of(&p.free_field_at(t_final)?), Some((_, hi)) if hi >= first_a) {
            return Err(Error::ScatteringIncomplete { time: t_final });
        }
    }
    if let Some(p) = packet_b {
        if matches!(support_of(&p.free_field_at(t_final)?), Some((lo, _)) if lo < first_a) {
            return Err(Error::ScatteringIncomplete { time: t_final });
        }
    }

    let state = scatter(packet_a, packet_b, mirror, t_final)?;
    let input_a = packet_a.map_or(0.0, WavePacket::energy);
    let input_b = packet_b.map_or(0.0, WavePacket::energy);
    let (output_a, output_b) = state.side_energies();
    let balance = (input_a + input_b) - (output_a + output_b);
    Ok(EnergyLedger {
        input_a,
        input_b,
        output_a,
        output_b,
        balance,
        relative_imbalance: balance.abs() / (input_a + input_b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use crate::mirror::Phases;

    fn domain() -> Domain {
        Domain::new(1024, 0.05, 1.0).unwrap()
    }

    fn packet(side: Side, center: f64) -> WavePacket {
        let env = GaussianEnvelope {
            center,
            width: 1.0,
            energy: 1.0,
            phase: 0.0,
        };
        WavePacket::gaussian(domain(), env, 2.0 * PI, side).unwrap()
    }

    #[test]
    fn grid_is_mirror_symmetric() {
        let d = domain();
        assert_eq!(d.len(), 2048);
        for i in [0, 17, 1023, 1024, 2047] {
            assert_eq!(d.x(d.mirror_index(i)), -d.x(i));
        }
        assert!(d.x(d.first_a_index()) > 0.0);
        assert!(d.x(d.first_a_index() - 1) < 0.0);
    }

    #[test]
    fn propagation_basics() {
        let p = packet(Side::A, 15.0);
        assert_eq!(p.propagate_free(0.0).unwrap().samples(), p.samples());

        let moved = p.propagate_free(0.05).unwrap();
        for i in 1..p.samples().len() {
            assert!((moved.samples()[i - 1] - p.samples()[i]).norm() < 1e-14);
        }

        for dt in [0.013, 1.7, 9.99] {
            let q = p.propagate_free(dt).unwrap();
            assert!((q.energy() - 1.0).abs() < 1e-14);
            assert_eq!(q.emitted_at(), dt);
        }
        assert!(p.propagate_free(-1.0).is_err());
        assert!(matches!(
            p.propagate_free(100.0),
            Err(Error::GridOverrun { .. })
        ));
    }

    #[test]
    fn spectral_shift_matches_analytic_packet() {
        let p = packet(Side::B, -20.0);
        let q = p.propagate_free(3.3).unwrap();
        let expected = packet(Side::B, -20.0 + 3.3);
        // Carrier phase shifts with the envelope: E(x - ct) = g(x - x0 - ct) e^{ik(x - ct)}.
        let phase = Complex64::from_polar(1.0, -2.0 * PI * 3.3);
        for (a, b) in q.samples().iter().zip(expected.samples()) {
            assert!((a - b * phase).norm() < 1e-12);
        }
    }

    #[test]
    fn energy_of_states() {
        let d = domain();
        assert_eq!(FieldState::zeros(d, 0.0).total_energy(), 0.0);

        let a = packet(Side::A, 15.0);
        let single = FieldState {
            domain: d,
            samples: a.samples().to_vec(),
            time: 0.0,
        };
        assert!((total_energy(&single) - 1.0).abs() < 1e-14);

        let b = packet(Side::B, -15.0);
        let both = FieldState {
            domain: d,
            samples: a
                .samples()
                .iter()
                .zip(b.samples())
                .map(|(x, y)| x + y)
                .collect(),
            time: 0.0,
        };
        assert!((both.total_energy() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_packet_splits_by_amplitudes() {
        let mirror = MirrorSpec::new(0.6, 0.5, None).unwrap();
        let a = packet(Side::A, 15.0);
        let ledger = energy_audit(Some(&a), None, &mirror, 30.0).unwrap();
        assert_abs_diff_eq!(ledger.output_a, 0.36, epsilon = 1e-12);
        assert_abs_diff_eq!(ledger.output_b, 0.64, epsilon = 1e-12);
        assert!(ledger.relative_imbalance <= 1e-12);
    }

    #[test]
    fn perfect_mirror_blocks_transmission() {
        let mirror = MirrorSpec::new(1.0, 0.3, None).unwrap();
        let a = packet(Side::A, 15.0);
        for t in [0.0, 10.0, 15.0, 20.0, 30.0] {
            let state = scatter(Some(&a), None, &mirror, t).unwrap();
            let (_, left) = state.side_energies();
            assert_eq!(left, 0.0);
        }
    }

    #[test]
    fn symmetric_two_sided_input_conserves_energy() {
        let mirror = MirrorSpec::symmetric(FRAC_1_SQRT_2).unwrap();
        let a = packet(Side::A, 15.0);
        let b = packet(Side::B, -15.0);
        let ledger = energy_audit(Some(&a), Some(&b), &mirror, 30.0).unwrap();
        assert!(ledger.relative_imbalance <= 1e-12, "{ledger:?}");
    }

    #[test]
    fn violated_phase_condition_leaks_energy() {
        let mut mirror = MirrorSpec::symmetric(FRAC_1_SQRT_2).unwrap();
        mirror.phases = Phases::new(0.0, 0.0, 0.0, 0.0);
        let a = packet(Side::A, 15.0);
        let b = packet(Side::B, -15.0);
        let ledger = energy_audit(Some(&a), Some(&b), &mirror, 30.0).unwrap();
        assert!(ledger.relative_imbalance >= 1e-3, "{ledger:?}");
        assert_abs_diff_eq!(
            ledger.balance,
            ledger.input_total() - ledger.output_total(),
            epsilon = 0.0
        );
    }

    #[test]
    fn incomplete_scattering_is_reported() {
        let mirror = MirrorSpec::symmetric(0.5).unwrap();
        let a = packet(Side::A, 15.0);
        assert_eq!(
            energy_audit(Some(&a), None, &mirror, 15.0),
            Err(Error::ScatteringIncomplete { time: 15.0 })
        );
    }

    #[test]
    fn side_and_direction_are_checked() {
        let mirror = MirrorSpec::symmetric(0.5).unwrap();
        let a = packet(Side::A, 15.0);
        assert!(matches!(
            scatter(None, Some(&a), &mirror, 0.0),
            Err(Error::SideMismatch(_))
        ));

        // Labelled a but sitting on x < 0.
        let misplaced = WavePacket::gaussian(
            domain(),
            GaussianEnvelope {
                center: -15.0,
                width: 1.0,
                energy: 1.0,
                phase: 0.0,
            },
            2.0 * PI,
            Side::A,
        )
        .unwrap();
        assert!(matches!(
            scatter(Some(&misplaced), None, &mirror, 0.0),
            Err(Error::SideMismatch(_))
        ));

        let outgoing = WavePacket::from_samples(
            domain(),
            a.samples().to_vec(),
            2.0 * PI,
            Direction::Right,
            Side::A,
            0.0,
        )
        .unwrap();
        assert!(matches!(
            scatter(Some(&outgoing), None, &mirror, 0.0),
            Err(Error::SideMismatch(_))
        ));
        assert_eq!(scatter(None, None, &mirror, 0.0), Err(Error::NoPackets));
    }

    #[test]
    fn transmitted_field_is_scaled_free_field() {
        let mirror = MirrorSpec::new(
            0.6,
            0.3,
            Some(Phases::new(PI / 3.0, 0.4, 0.1, PI / 3.0 - 0.4 + 0.1 - PI)),
        )
        .unwrap();
        let a = packet(Side::A, 10.0);
        let probe = 300; // x < 0
        let factor = Complex64::from_polar(mirror.t_a, mirror.phases.phi_4);
        for step in 0..60 {
            let t = step as f64 * 0.5;
            let state = scatter(Some(&a), None, &mirror, t).unwrap();
            let free = a.free_field_at(t).unwrap();
            assert!((state.samples[probe] - factor * free[probe]).norm() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scattering_is_linear(
            ar in -2.0f64..2.0, ai in -2.0f64..2.0,
            br in -2.0f64..2.0, bi in -2.0f64..2.0,
            t in 0.0f64..30.0,
            ra in 0.0f64..=1.0, rb in 0.0f64..=1.0,
        ) {
            let mirror = MirrorSpec::new(ra, rb, None).unwrap();
            let a = packet(Side::A, 14.0);
            let b = packet(Side::B, -17.0);
            let (alpha, beta) = (Complex64::new(ar, ai), Complex64::new(br, bi));
            let joint = scatter(Some(&a.scaled(alpha)), Some(&b.scaled(beta)), &mirror, t).unwrap();
            let only_a = scatter(Some(&a), None, &mirror, t).unwrap();
            let only_b = scatter(None, Some(&b), &mirror, t).unwrap();
            for i in 0..joint.samples.len() {
                let expected = alpha * only_a.samples[i] + beta * only_b.samples[i];
                prop_assert!((joint.samples[i] - expected).norm() <= 1e-14);
            }
        }

        #[test]
        fn equal_reflectances_conserve_energy(
            r in 0.0f64..=1.0,
            center_a in 10.0f64..16.0,
            center_b in -16.0f64..-10.0,
            width_a in 0.5f64..1.2,
            width_b in 0.5f64..1.2,
            energy_b in 0.1f64..3.0,
            phase_b in 0.0f64..6.3,
            delay in 0.0f64..3.0,
            p1 in -3.0f64..3.0,
            p2 in -3.0f64..3.0,
        ) {
            let d = domain();
            let mirror = MirrorSpec::new(r, r, Some(Phases::new(p1, p2, 0.0, p1 - p2 - PI))).unwrap();
            let a = WavePacket::gaussian(d, GaussianEnvelope { center: center_a, width: width_a, energy: 1.0, phase: 0.0 }, 2.0 * PI, Side::A).unwrap();
            let b = WavePacket::gaussian(d, GaussianEnvelope { center: center_b, width: width_b, energy: energy_b, phase: phase_b }, 2.0 * PI, Side::B)
                .unwrap()
                .with_emission_time(delay);
            let ledger = energy_audit(Some(&a), Some(&b), &mirror, 30.0).unwrap();
            prop_assert!(ledger.relative_imbalance <= 1e-12, "{:?}", ledger);
        }
    }
}
