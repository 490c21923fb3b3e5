//! The I3322 Bell functional in its three printed presentations, plus the
//! Horodecki criterion for the maximal CHSH value of a two-qubit state.
//!
//! Sign conventions are the main hazard here. Throughout, `P(A_i)` denotes
//! the probability of *outcome 0* for Alice's setting `A_i` (likewise for
//! Bob), and `P(A_iB_j)` abbreviates `P(00 | A_iB_j)`. Local boxes satisfy
//! `S <= 0`; the conjectured qubit maximum is 0.25.

use serde::Serialize;

use crate::game::{LocalBoxParams, ProbabilityBox};
use crate::qmath::{pauli_matrices, sym3_eigenvalues, ComplexMatrix};
use crate::quantum::TwoQubitState;

/// Which of the three equivalent presentations produced an S value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum I3322Form {
    CoefficientTable,
    FullProbability,
    LocalParams,
}

/// An evaluated I3322 functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct I3322Value {
    pub s: f64,
    #[serde(rename = "form")]
    pub form_used: I3322Form,
}

/// S as the linear expression in the box parameterization:
/// `C11 + C12 + C13 + C21 + C22 - C23 + C31 - C32 - M1 - 2 N1 - N2`.
pub fn i3322_local_form(params: &LocalBoxParams) -> I3322Value {
    let c = params.c();
    let m = params.m();
    let n = params.n();
    let s = c[0][0] + c[0][1] + c[0][2] + c[1][0] + c[1][1] - c[1][2] + c[2][0]
        - c[2][1]
        - m[0]
        - 2.0 * n[0]
        - n[1];
    I3322Value {
        s,
        form_used: I3322Form::LocalParams,
    }
}

/// S as the explicit expansion over individual box probabilities, in a form
/// close to how CHSH is usually written.
pub fn i3322_full_form(b: &ProbabilityBox) -> I3322Value {
    let p = |x: usize, y: usize, a: u8, bo: u8| b.prob(x, y, a, bo);
    let t = 1.0 / 3.0;
    let s = -t * p(0, 0, 0, 1) - 2.0 * t * p(0, 0, 1, 0) + t * p(0, 1, 0, 0)
        - t * p(0, 1, 0, 1)
        - t * p(0, 1, 1, 0)
        + 2.0 * t * p(0, 2, 0, 0)
        - t * p(0, 2, 0, 1)
        + t * p(1, 0, 0, 0)
        - 2.0 * t * p(1, 0, 1, 0)
        + 2.0 * t * p(1, 1, 0, 0)
        - t * p(1, 1, 1, 0)
        - p(1, 2, 0, 0)
        + t * p(2, 0, 0, 0)
        - 2.0 * t * p(2, 0, 1, 0)
        - 4.0 * t * p(2, 1, 0, 0)
        - t * p(2, 1, 1, 0);
    I3322Value {
        s,
        form_used: I3322Form::FullProbability,
    }
}

/// Coefficients of `P(A_iB_j)` in the tabular presentation; row index is
/// Bob's setting, column index is Alice's.
const BODY_COEFF: [[f64; 3]; 3] = [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 0.0]];

/// Coefficients of the marginals `P(A_1..A_3)` and `P(B_1..B_3)`.
const ALICE_MARGINAL_COEFF: [f64; 3] = [-1.0, 0.0, 0.0];
const BOB_MARGINAL_COEFF: [f64; 3] = [-2.0, -1.0, 0.0];

/// S from the coefficient table: marginal coefficients on `P(A_i)`, `P(B_j)`
/// plus the 3x3 body on the joint zero-outcome probabilities.
pub fn i3322_coefficient_form(b: &ProbabilityBox) -> I3322Value {
    let mut s = 0.0;
    for (i, coeff) in ALICE_MARGINAL_COEFF.iter().enumerate() {
        s += coeff * b.marginal_a(i);
    }
    for (j, coeff) in BOB_MARGINAL_COEFF.iter().enumerate() {
        s += coeff * b.marginal_b(j);
    }
    for (j, row) in BODY_COEFF.iter().enumerate() {
        for (i, coeff) in row.iter().enumerate() {
            s += coeff * b.corr(i, j);
        }
    }
    I3322Value {
        s,
        form_used: I3322Form::CoefficientTable,
    }
}

// ---------------------------------------------------------------------------
// CHSH via the Horodecki criterion
// ---------------------------------------------------------------------------

/// Result of the Horodecki criterion: for a two-qubit state the maximal CHSH
/// value over all measurement choices is `2 sqrt(m)`, where `m` is the sum of
/// the two largest eigenvalues of `T^t T` and `T` is the Pauli correlation
/// matrix `T_uv = tr[rho (sigma_u (x) sigma_v)]`.
#[derive(Debug, Clone, Serialize)]
pub struct ChshReport {
    #[serde(rename = "T")]
    pub correlation_matrix: [[f64; 3]; 3],
    pub m_value: f64,
    pub max_chsh: f64,
    /// True when some measurement choice beats the classical bound 2,
    /// i.e. `m_value > 1`.
    pub violates: bool,
}

/// Evaluates the Horodecki criterion exactly (no optimization loop).
pub fn max_chsh_horodecki(state: &TwoQubitState) -> ChshReport {
    let paulis = pauli_matrices();
    let rho = state.density_matrix();
    let mut t = [[0.0f64; 3]; 3];
    for (u, sigma_u) in paulis.iter().enumerate() {
        for (v, sigma_v) in paulis.iter().enumerate() {
            let op = sigma_u.tensor(sigma_v).expect("paulis are 2x2");
            let mut tr = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    tr += op.get(i, j) * rho.get(j, i);
                }
            }
            t[u][v] = tr.re;
        }
    }
    // T^t T is symmetric by construction.
    let mut tt = [0.0f64; 9];
    for i in 0..3 {
        for j in 0..3 {
            tt[3 * i + j] = (0..3).map(|k| t[k][i] * t[k][j]).sum();
        }
    }
    let gram = ComplexMatrix::from_real(3, 3, &tt).expect("9 entries");
    let eigs = sym3_eigenvalues(&gram).expect("T^t T is symmetric");
    let m_value = (eigs[0] + eigs[1]).max(0.0);
    ChshReport {
        correlation_matrix: t,
        m_value,
        max_chsh: 2.0 * m_value.sqrt(),
        violates: m_value > 1.0,
    }
}
