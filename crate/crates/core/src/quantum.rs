//! Two-qubit states, projective measurements from Bloch angles, and the
//! Born-rule construction of probability boxes.
//!
//! Convention: a setting `(theta, phi)` measures along the Bloch direction
//! whose +1 eigenvector is `|n+> = (cos(theta/2), e^{i phi} sin(theta/2))`,
//! and outcome 0 projects onto `|n+>`. Density matrices use the basis order
//! `|00>, |01>, |10>, |11>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::ProbabilityBox;
use crate::qmath::{ComplexMatrix, DEFAULT_TOL};

/// Wraps an angle into `[-pi, pi]`. Values already in range pass through
/// bitwise unchanged, so wrapping is idempotent.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    if (-PI..=PI).contains(&x) {
        return x;
    }
    (x + PI).rem_euclid(2.0 * PI) - PI
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// A validated two-qubit density matrix: Hermitian, unit trace, and positive
/// semidefinite, all within 1e-9.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateEntries", into = "StateEntries")]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

/// One matrix entry in the JSON state format.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

type StateEntries = Vec<Vec<ComplexEntry>>;

impl TryFrom<StateEntries> for TwoQubitState {
    type Error = Error;
    fn try_from(rows: StateEntries) -> Result<Self> {
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(Error::InvalidArgument(
                "state JSON must be a 4x4 array of {re, im} entries".into(),
            ));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|e| Complex64::new(e.re, e.im))
            .collect();
        Self::new(ComplexMatrix::from_entries(4, 4, entries)?)
    }
}

impl From<TwoQubitState> for StateEntries {
    fn from(state: TwoQubitState) -> Self {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let v = state.rho.get(i, j);
                        ComplexEntry { re: v.re, im: v.im }
                    })
                    .collect()
            })
            .collect()
    }
}

impl TwoQubitState {
    /// Validates and wraps a density matrix.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be 4x4, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let report = rho.hermitian_report()?;
        if !report.is_hermitian {
            return Err(Error::InvalidArgument(format!(
                "density matrix not Hermitian: max asymmetry {}",
                report.max_asymmetry
            )));
        }
        if (report.trace.re - 1.0).abs() > DEFAULT_TOL || report.trace.im.abs() > DEFAULT_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {} + {}i, expected 1",
                report.trace.re, report.trace.im
            )));
        }
        if report.min_eigenvalue < -DEFAULT_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix not positive semidefinite: eigenvalue {}",
                report.min_eigenvalue
            )));
        }
        Ok(Self { rho })
    }

    /// Density matrix of a pure state. The amplitude vector must be
    /// normalized within 1e-9; global phase is irrelevant.
    pub fn from_pure(amplitudes: &[Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidArgument(format!(
                "pure state has squared norm {norm_sq}, expected 1"
            )));
        }
        Self::new(ComplexMatrix::outer(amplitudes))
    }

    pub fn density_matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// `tr(rho^2)`; equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.rho
            .mul(&self.rho)
            .and_then(|m| m.trace())
            .map(|t| t.re)
            .unwrap_or(f64::NAN)
    }
}

/// The mixed entangled advice state `0.85 |phi><phi| + 0.15 |01><01|` with
/// `|phi> = (2|00> + |11>)/sqrt(5)`.
pub fn reference_state() -> TwoQubitState {
    let s5 = 5.0f64.sqrt();
    let phi = [
        Complex64::new(2.0 / s5, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0 / s5, 0.0),
    ];
    let mut rho = ComplexMatrix::outer(&phi).scale(Complex64::new(0.85, 0.0));
    rho.set(1, 1, rho.get(1, 1) + Complex64::new(0.15, 0.0));
    TwoQubitState::new(rho).expect("reference state is a valid density matrix")
}

/// The singlet `|psi-> = (|01> - |10>)/sqrt(2)` as a density matrix.
pub fn singlet_state() -> TwoQubitState {
    let s2 = 2.0f64.sqrt();
    let psi = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0 / s2, 0.0),
        Complex64::new(-1.0 / s2, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    TwoQubitState::from_pure(&psi).expect("singlet is a valid pure state")
}

/// The maximally mixed state `I/4`.
pub fn maximally_mixed_state() -> TwoQubitState {
    TwoQubitState::new(ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)))
        .expect("I/4 is a valid density matrix")
}

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

/// A projective qubit measurement along the Bloch direction `(theta, phi)`,
/// in radians. Any real angles are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementSetting {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Canonical form: theta wrapped into `[-pi, pi)`, then negative theta
    /// mapped to `(-theta, phi + pi)`, then phi wrapped into `[0, 2pi)`.
    /// Settings related by the `(-theta, phi)` / `(theta, phi + pi)`
    /// symmetry share a canonical form.
    pub fn canonical(&self) -> Self {
        let mut theta = wrap_angle(self.theta);
        let mut phi = self.phi;
        if theta < 0.0 {
            theta = -theta;
            phi += std::f64::consts::PI;
        }
        phi = phi.rem_euclid(2.0 * std::f64::consts::PI);
        Self { theta, phi }
    }

    /// Projector onto the outcome eigenspace: outcome 0 is `|n+><n+|` with
    /// `|n+> = (cos(theta/2), e^{i phi} sin(theta/2))`; outcome 1 is its
    /// complement `I - |n+><n+|`.
    pub fn projector(&self, outcome: u8) -> ComplexMatrix {
        let half = self.theta / 2.0;
        let up = Complex64::new(half.cos(), 0.0);
        let down = Complex64::from_polar(half.sin(), self.phi);
        let p0 = ComplexMatrix::outer(&[up, down]);
        match outcome {
            0 => p0,
            _ => ComplexMatrix::identity(2).sub(&p0).unwrap(),
        }
    }
}

/// One measurement setting per question, for one player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasurementTriple {
    pub settings: [MeasurementSetting; 3],
}

impl MeasurementTriple {
    pub fn new(settings: [MeasurementSetting; 3]) -> Self {
        Self { settings }
    }

    pub fn setting(&self, question: usize) -> MeasurementSetting {
        self.settings[question]
    }
}

/// The measurement settings used with the advice state: Alice
/// `(eta, 0), (-eta, 0), (-pi/2, 0)` and Bob `(-chi, 0), (chi, 0), (pi/2, 0)`
/// with `cos(eta) = sqrt(7/8)` and `cos(chi) = sqrt(2/3)`.
pub fn reference_settings() -> (MeasurementTriple, MeasurementTriple) {
    let eta = (7.0f64 / 8.0).sqrt().acos();
    let chi = (2.0f64 / 3.0).sqrt().acos();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let alice = MeasurementTriple::new([
        MeasurementSetting::new(eta, 0.0),
        MeasurementSetting::new(-eta, 0.0),
        MeasurementSetting::new(-half_pi, 0.0),
    ]);
    let bob = MeasurementTriple::new([
        MeasurementSetting::new(-chi, 0.0),
        MeasurementSetting::new(chi, 0.0),
        MeasurementSetting::new(half_pi, 0.0),
    ]);
    (alice, bob)
}

// ---------------------------------------------------------------------------
// Born rule
// ---------------------------------------------------------------------------

/// `P(a, b) = tr[(Pi_a (x) Pi_b) rho]`, clamped to `[0, 1]` after checking
/// that any negativity is within rounding tolerance.
pub fn joint_probability(
    state: &TwoQubitState,
    alice: MeasurementSetting,
    bob: MeasurementSetting,
    a: u8,
    b: u8,
) -> Result<f64> {
    let op = alice.projector(a).tensor(&bob.projector(b))?;
    // tr(op * rho) without forming the product matrix.
    let rho = state.density_matrix();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            tr += op.get(i, j) * rho.get(j, i);
        }
    }
    if tr.im.abs() > DEFAULT_TOL {
        return Err(Error::Inconsistency(format!(
            "Born probability has imaginary part {}",
            tr.im
        )));
    }
    let p = tr.re;
    if p < -DEFAULT_TOL {
        return Err(Error::Inconsistency(format!(
            "Born probability {p} negative beyond tolerance"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Builds the full 9x4 probability box of a state under the given settings,
/// one Born-rule trace per entry.
pub fn box_from_state(
    state: &TwoQubitState,
    alice: &MeasurementTriple,
    bob: &MeasurementTriple,
) -> Result<ProbabilityBox> {
    let mut entries = [[0.0; 4]; 9];
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    entries[3 * i + j][(2 * a + b) as usize] =
                        joint_probability(state, alice.setting(i), bob.setting(j), a, b)?;
                }
            }
        }
    }
    ProbabilityBox::new(entries)
}
