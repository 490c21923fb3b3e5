//! The two-player, 3-question/2-answer game model: utility tables, priors,
//! probability boxes and payoff evaluation.
//!
//! Question indices are 0-based internally and rendered 1-based (`A1..A3`,
//! `B1..B3`) in output. Probability-box rows are ordered `A1B1, A1B2, A1B3,
//! A2B1, ..., A3B3`; columns are the answer pairs `00, 01, 10, 11`.

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for probability-box row sums, entry ranges and no-signaling.
pub const BOX_TOL: f64 = 1e-9;

/// Number of questions per player.
pub const QUESTIONS: usize = 3;

/// Display label for a question pair, e.g. `(0, 2)` -> `"A1B3"`.
pub fn pair_label(x: usize, y: usize) -> String {
    format!("A{}B{}", x + 1, y + 1)
}

fn parse_pair_label(label: &str) -> Result<(usize, usize)> {
    let bytes = label.as_bytes();
    if bytes.len() == 4 && bytes[0] == b'A' && bytes[2] == b'B' {
        let x = (bytes[1] as char).to_digit(10);
        let y = (bytes[3] as char).to_digit(10);
        if let (Some(x), Some(y)) = (x, y) {
            if (1..=3).contains(&x) && (1..=3).contains(&y) {
                return Ok((x as usize - 1, y as usize - 1));
            }
        }
    }
    Err(Error::InvalidArgument(format!(
        "bad question-pair label {label:?}, expected A1B1..A3B3"
    )))
}

// ---------------------------------------------------------------------------
// Utilities
// ---------------------------------------------------------------------------

/// Per-question-pair payoff entries `u_A(a,b|x,y)`, `u_B(a,b|x,y)`, stored as
/// exact rationals. Indexed by question pair `(x, y)` and answer pair `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityTable {
    // entries[3x + y][a][b] = (u_A, u_B)
    entries: [[[(Rational64, Rational64); 2]; 2]; 9],
}

impl UtilityTable {
    /// Builds a table by evaluating `f(x, y, a, b) -> (u_A, u_B)` on all 36 cells.
    pub fn from_fn(f: impl Fn(usize, usize, u8, u8) -> (Rational64, Rational64)) -> Self {
        let zero = (Rational64::from_integer(0), Rational64::from_integer(0));
        let mut entries = [[[zero; 2]; 2]; 9];
        for x in 0..QUESTIONS {
            for y in 0..QUESTIONS {
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        entries[3 * x + y][a as usize][b as usize] = f(x, y, a, b);
                    }
                }
            }
        }
        Self { entries }
    }

    /// Both players' payoffs for answers `(a, b)` to question pair `(x, y)`.
    pub fn utilities(&self, x: usize, y: usize, a: u8, b: u8) -> (Rational64, Rational64) {
        self.entries[3 * x + y][a as usize][b as usize]
    }

    pub fn u_a(&self, x: usize, y: usize, a: u8, b: u8) -> Rational64 {
        self.utilities(x, y, a, b).0
    }

    pub fn u_b(&self, x: usize, y: usize, a: u8, b: u8) -> Rational64 {
        self.utilities(x, y, a, b).1
    }
}

/// The fixed utility assignment of the game under study.
///
/// Five distinct 2x2 payoff boxes cover the nine question pairs: one box for
/// all of `A1B1, A1B2, A1B3`; one for `A2B1, A3B1`; one for `A2B3, A3B2`; and
/// one each for `A2B2` and `A3B3`. Row index is Alice's answer `a`, column
/// index is Bob's answer `b`.
pub fn reference_utilities() -> UtilityTable {
    let r = Rational64::new;
    // box[a][b] = (u_A, u_B)
    let row_a = [
        [(r(2, 3), r(1, 1)), (r(-1, 3), r(0, 1))],
        [(r(0, 1), r(1, 3)), (r(0, 1), r(1, 3))],
    ];
    let col_b1 = [
        [(r(1, 2), r(0, 1)), (r(1, 2), r(0, 1))],
        [(r(-1, 2), r(-1, 1)), (r(1, 2), r(0, 1))],
    ];
    let anti_diag = [
        [(r(-2, 3), r(-1, 3)), (r(1, 3), r(2, 3))],
        [(r(1, 3), r(2, 3)), (r(1, 3), r(2, 3))],
    ];
    let centre = [
        [(r(1, 3), r(2, 3)), (r(1, 3), r(2, 3))],
        [(r(-2, 3), r(-1, 3)), (r(1, 3), r(2, 3))],
    ];
    let corner = [
        [(r(0, 1), r(0, 1)), (r(-1, 3), r(1, 3))],
        [(r(1, 3), r(-1, 3)), (r(0, 1), r(0, 1))],
    ];
    UtilityTable::from_fn(|x, y, a, b| {
        let boxed = match (x, y) {
            (0, _) => &row_a,
            (1, 0) | (2, 0) => &col_b1,
            (1, 2) | (2, 1) => &anti_diag,
            (1, 1) => &centre,
            (2, 2) => &corner,
            _ => unreachable!(),
        };
        boxed[a as usize][b as usize]
    })
}

// ---------------------------------------------------------------------------
// Game definition
// ---------------------------------------------------------------------------

/// A complete game: question count, prior over question pairs, and utilities.
#[derive(Debug, Clone)]
pub struct GameDefinition {
    prior: [[Rational64; 3]; 3],
    utilities: UtilityTable,
}

impl GameDefinition {
    /// Validates that the prior is a probability distribution (sums to one
    /// exactly, entries in `[0, 1]`).
    pub fn new(prior: [[Rational64; 3]; 3], utilities: UtilityTable) -> Result<Self> {
        let mut total = Rational64::from_integer(0);
        for row in &prior {
            for &p in row {
                if p < Rational64::from_integer(0) || p > Rational64::from_integer(1) {
                    return Err(Error::InvalidArgument(format!(
                        "prior entry {p} outside [0, 1]"
                    )));
                }
                total += p;
            }
        }
        if total != Rational64::from_integer(1) {
            return Err(Error::InvalidArgument(format!(
                "prior sums to {total}, expected 1"
            )));
        }
        Ok(Self { prior, utilities })
    }

    /// The game under study: uniform 1/9 prior and the reference utilities.
    pub fn reference() -> Self {
        Self::with_uniform_prior(reference_utilities())
    }

    /// A game with the uniform 1/9 prior and the given utilities.
    pub fn with_uniform_prior(utilities: UtilityTable) -> Self {
        let ninth = Rational64::new(1, 9);
        Self {
            prior: [[ninth; 3]; 3],
            utilities,
        }
    }

    pub fn prior(&self, x: usize, y: usize) -> Rational64 {
        self.prior[x][y]
    }

    pub fn questions_per_player(&self) -> usize {
        QUESTIONS
    }

    pub fn utilities(&self) -> &UtilityTable {
        &self.utilities
    }

    /// Average payoffs of a probability box under this game:
    /// `F = sum_{x,y} p(x,y) sum_{a,b} P(a,b|x,y) u(a,b|x,y)`.
    pub fn payoffs(&self, probability_box: &ProbabilityBox) -> PayoffPair {
        let mut f_a = 0.0;
        let mut f_b = 0.0;
        for x in 0..QUESTIONS {
            for y in 0..QUESTIONS {
                let p_xy = self.prior[x][y].to_f64().unwrap();
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        let p = probability_box.prob(x, y, a, b);
                        let (u_a, u_b) = self.utilities.utilities(x, y, a, b);
                        f_a += p_xy * p * u_a.to_f64().unwrap();
                        f_b += p_xy * p * u_b.to_f64().unwrap();
                    }
                }
            }
        }
        PayoffPair::new(f_a, f_b)
    }
}

/// Average payoffs of a box under the game. See [`GameDefinition::payoffs`].
pub fn payoffs_from_box(probability_box: &ProbabilityBox, game: &GameDefinition) -> PayoffPair {
    game.payoffs(probability_box)
}

// ---------------------------------------------------------------------------
// Payoffs
// ---------------------------------------------------------------------------

/// Average payoffs `(F_A, F_B)` and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffPair {
    #[serde(rename = "F_A")]
    pub f_a: f64,
    #[serde(rename = "F_B")]
    pub f_b: f64,
    /// Always exactly `f_a + f_b`.
    pub welfare: f64,
}

impl PayoffPair {
    pub fn new(f_a: f64, f_b: f64) -> Self {
        Self {
            f_a,
            f_b,
            welfare: f_a + f_b,
        }
    }
}

// ---------------------------------------------------------------------------
// Local box parameterization
// ---------------------------------------------------------------------------

/// Marginals and correlations `(M_i, N_j, C_ij)` of a no-signaling box:
/// `M_i = P(a=0|A_i)`, `N_j = P(b=0|B_j)`, `C_ij = P(00|A_iB_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLocalBoxParams", into = "RawLocalBoxParams")]
pub struct LocalBoxParams {
    m: [f64; 3],
    n: [f64; 3],
    c: [[f64; 3]; 3],
}

#[derive(Serialize, Deserialize)]
struct RawLocalBoxParams {
    #[serde(rename = "M")]
    m: [f64; 3],
    #[serde(rename = "N")]
    n: [f64; 3],
    #[serde(rename = "C")]
    c: [[f64; 3]; 3],
}

impl TryFrom<RawLocalBoxParams> for LocalBoxParams {
    type Error = Error;
    fn try_from(raw: RawLocalBoxParams) -> Result<Self> {
        Self::new(raw.m, raw.n, raw.c)
    }
}

impl From<LocalBoxParams> for RawLocalBoxParams {
    fn from(p: LocalBoxParams) -> Self {
        Self {
            m: p.m,
            n: p.n,
            c: p.c,
        }
    }
}

impl LocalBoxParams {
    /// Validates `0 <= M_i, N_j <= 1` and
    /// `max(0, M_i + N_j - 1) <= C_ij <= min(M_i, N_j)`, which together make
    /// all four cell probabilities of every row nonnegative. Bounds carry a
    /// [`BOX_TOL`] slack so parameters extracted from floating-point boxes
    /// survive validation.
    pub fn new(m: [f64; 3], n: [f64; 3], c: [[f64; 3]; 3]) -> Result<Self> {
        for (label, vals) in [("M", &m), ("N", &n)] {
            for (i, &v) in vals.iter().enumerate() {
                if !v.is_finite() || !(-BOX_TOL..=1.0 + BOX_TOL).contains(&v) {
                    return Err(Error::InvalidArgument(format!(
                        "{label}_{} = {v} outside [0, 1]",
                        i + 1
                    )));
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let lower = (m[i] + n[j] - 1.0).max(0.0);
                let upper = m[i].min(n[j]);
                let v = c[i][j];
                if !v.is_finite() || v < lower - BOX_TOL || v > upper + BOX_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "C_{}{} = {v} outside [{lower}, {upper}] given M_{} = {}, N_{} = {}",
                        i + 1,
                        j + 1,
                        i + 1,
                        m[i],
                        j + 1,
                        n[j]
                    )));
                }
            }
        }
        Ok(Self { m, n, c })
    }

    pub fn m(&self) -> &[f64; 3] {
        &self.m
    }

    pub fn n(&self) -> &[f64; 3] {
        &self.n
    }

    pub fn c(&self) -> &[[f64; 3]; 3] {
        &self.c
    }

    /// Expands the parameterization into the full 9x4 box: row `(A_i, B_j)`
    /// is `[C_ij, M_i - C_ij, N_j - C_ij, 1 - M_i - N_j + C_ij]`.
    pub fn expand(&self) -> Result<ProbabilityBox> {
        let mut entries = [[0.0; 4]; 9];
        for i in 0..3 {
            for j in 0..3 {
                let c = self.c[i][j];
                entries[3 * i + j] = [
                    c,
                    self.m[i] - c,
                    self.n[j] - c,
                    1.0 - self.m[i] - self.n[j] + c,
                ];
            }
        }
        ProbabilityBox::new(entries)
    }

    /// Draws a uniformly random valid parameter set: marginals uniform on
    /// `[0, 1]`, each correlation uniform on its feasible interval.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut m = [0.0; 3];
        let mut n = [0.0; 3];
        for v in &mut m {
            *v = rng.gen::<f64>();
        }
        for v in &mut n {
            *v = rng.gen::<f64>();
        }
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let lower = (m[i] + n[j] - 1.0).max(0.0);
                let upper = m[i].min(n[j]);
                c[i][j] = lower + rng.gen::<f64>() * (upper - lower);
            }
        }
        Self { m, n, c }
    }
}

// ---------------------------------------------------------------------------
// Probability box
// ---------------------------------------------------------------------------

/// The conditional distribution `P(a,b | A_i, B_j)` over the four answer
/// pairs, for each of the nine question pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<BoxRow>", into = "Vec<BoxRow>")]
pub struct ProbabilityBox {
    // entries[3i + j] = [P(00), P(01), P(10), P(11)] given (A_{i+1}, B_{j+1})
    entries: [[f64; 4]; 9],
}

#[derive(Serialize, Deserialize)]
struct BoxRow {
    pair: String,
    probs: [f64; 4],
}

impl TryFrom<Vec<BoxRow>> for ProbabilityBox {
    type Error = Error;
    fn try_from(rows: Vec<BoxRow>) -> Result<Self> {
        if rows.len() != 9 {
            return Err(Error::InvalidArgument(format!(
                "probability box needs 9 rows, got {}",
                rows.len()
            )));
        }
        let mut entries = [[f64::NAN; 4]; 9];
        let mut seen = [false; 9];
        for row in rows {
            let (x, y) = parse_pair_label(&row.pair)?;
            let idx = 3 * x + y;
            if seen[idx] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate row for {}",
                    row.pair
                )));
            }
            seen[idx] = true;
            entries[idx] = row.probs;
        }
        Self::new(entries)
    }
}

impl From<ProbabilityBox> for Vec<BoxRow> {
    fn from(b: ProbabilityBox) -> Self {
        (0..3)
            .flat_map(|x| {
                (0..3).map(move |y| BoxRow {
                    pair: pair_label(x, y),
                    probs: b.entries[3 * x + y],
                })
            })
            .collect()
    }
}

impl ProbabilityBox {
    /// Validates entry ranges, row normalization, and no-signaling, all
    /// within [`BOX_TOL`].
    pub fn new(entries: [[f64; 4]; 9]) -> Result<Self> {
        for (idx, row) in entries.iter().enumerate() {
            let (x, y) = (idx / 3, idx % 3);
            for &p in row {
                if !p.is_finite() || !(-BOX_TOL..=1.0 + BOX_TOL).contains(&p) {
                    return Err(Error::InvalidArgument(format!(
                        "probability {p} in row {} outside [0, 1]",
                        pair_label(x, y)
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > BOX_TOL {
                return Err(Error::InvalidArgument(format!(
                    "row {} sums to {sum}, expected 1",
                    pair_label(x, y)
                )));
            }
        }
        let boxed = Self { entries };
        let ns = boxed.no_signaling_violation();
        if ns > BOX_TOL {
            return Err(Error::InvalidArgument(format!(
                "no-signaling violated by {ns}"
            )));
        }
        Ok(boxed)
    }

    pub fn prob(&self, x: usize, y: usize, a: u8, b: u8) -> f64 {
        self.entries[3 * x + y][(2 * a + b) as usize]
    }

    pub fn row(&self, x: usize, y: usize) -> &[f64; 4] {
        &self.entries[3 * x + y]
    }

    /// Alice's marginal `P(a=0 | A_i)`, averaged over Bob's settings.
    pub fn marginal_a(&self, x: usize) -> f64 {
        (0..3)
            .map(|y| self.prob(x, y, 0, 0) + self.prob(x, y, 0, 1))
            .sum::<f64>()
            / 3.0
    }

    /// Bob's marginal `P(b=0 | B_j)`, averaged over Alice's settings.
    pub fn marginal_b(&self, y: usize) -> f64 {
        (0..3)
            .map(|x| self.prob(x, y, 0, 0) + self.prob(x, y, 1, 0))
            .sum::<f64>()
            / 3.0
    }

    /// Joint zero-outcome probability `C_ij = P(00 | A_i, B_j)`.
    pub fn corr(&self, x: usize, y: usize) -> f64 {
        self.prob(x, y, 0, 0)
    }

    /// Largest deviation of the per-question marginals across the other
    /// party's settings. Zero for exactly no-signaling boxes.
    pub fn no_signaling_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..3 {
            let margins: Vec<f64> = (0..3)
                .map(|y| self.prob(x, y, 0, 0) + self.prob(x, y, 0, 1))
                .collect();
            let lo = margins.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(hi - lo);
        }
        for y in 0..3 {
            let margins: Vec<f64> = (0..3)
                .map(|x| self.prob(x, y, 0, 0) + self.prob(x, y, 1, 0))
                .collect();
            let lo = margins.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(hi - lo);
        }
        worst
    }

    /// Extracts the `(M, N, C)` parameterization of this box.
    pub fn local_params(&self) -> Result<LocalBoxParams> {
        let m = [self.marginal_a(0), self.marginal_a(1), self.marginal_a(2)];
        let n = [self.marginal_b(0), self.marginal_b(1), self.marginal_b(2)];
        let mut c = [[0.0; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.corr(i, j);
            }
        }
        LocalBoxParams::new(m, n, c)
    }
}

// ---------------------------------------------------------------------------
// Closed-form payoffs
// ---------------------------------------------------------------------------

/// The closed-form average payoffs of the reference game, transcribed term
/// by term, over any numeric type (`f64` for measured boxes, rationals for
/// the exact classical table).
pub(crate) fn closed_form_in<T>(m: &[T; 3], n: &[T; 3], c: &[[T; 3]; 3]) -> (T, T)
where
    T: Clone + Num + FromPrimitive,
{
    let k = |v: i64| T::from_i64(v).unwrap();
    let common =
        c[0][0].clone() + c[0][1].clone() + c[0][2].clone() + c[1][0].clone() + c[2][0].clone()
            - c[1][2].clone()
            - c[2][1].clone()
            + c[1][1].clone()
            - m[0].clone()
            - k(2) * n[0].clone()
            - n[1].clone();
    let f_a = (common.clone() - m[2].clone() / k(3) + n[2].clone() / k(3) + k(2)) / k(9);
    let f_b = (common + m[2].clone() / k(3) - n[2].clone() / k(3) + k(3)) / k(9);
    (f_a, f_b)
}

/// Average payoffs of the reference game evaluated directly from the box
/// parameterization, bypassing the 9x4 expansion.
///
/// Agrees with [`payoffs_from_box`] over the expanded box to machine
/// precision; the two routes are kept separate so each checks the other.
pub fn closed_form_payoffs(params: &LocalBoxParams) -> PayoffPair {
    let (f_a, f_b) = closed_form_in(params.m(), params.n(), params.c());
    PayoffPair::new(f_a, f_b)
}

/// Exact-rational evaluation of the same closed form.
pub fn closed_form_payoffs_exact(
    m: &[Rational64; 3],
    n: &[Rational64; 3],
    c: &[[Rational64; 3]; 3],
) -> (Rational64, Rational64) {
    closed_form_in(m, n, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_utilities_spot_values() {
        let u = reference_utilities();
        assert_eq!(u.u_a(0, 0, 0, 0), Rational64::new(2, 3));
        assert_eq!(u.u_b(0, 0, 0, 0), Rational64::from_integer(1));
        assert_eq!(u.u_a(1, 0, 1, 0), Rational64::new(-1, 2));
        assert_eq!(u.u_b(1, 0, 1, 0), Rational64::from_integer(-1));
        assert_eq!(u.u_a(2, 2, 0, 0), Rational64::from_integer(0));
        assert_eq!(u.u_b(2, 2, 0, 0), Rational64::from_integer(0));
    }

    #[test]
    fn expand_deterministic_all_zero_answers() {
        let p = LocalBoxParams::new([1.0; 3], [1.0; 3], [[1.0; 3]; 3]).unwrap();
        let b = p.expand().unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(b.prob(x, y, 0, 0), 1.0);
                assert_eq!(b.prob(x, y, 1, 1), 0.0);
            }
        }
    }

    #[test]
    fn expand_deterministic_all_one_answers() {
        let p = LocalBoxParams::new([0.0; 3], [0.0; 3], [[0.0; 3]; 3]).unwrap();
        let b = p.expand().unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(b.prob(x, y, 1, 1), 1.0);
            }
        }
    }

    #[test]
    fn expand_rejects_infeasible_correlation() {
        // C_11 above min(M_1, N_1).
        let err = LocalBoxParams::new([0.5; 3], [0.5; 3], {
            let mut c = [[0.25; 3]; 3];
            c[0][0] = 0.7;
            c
        })
        .unwrap_err();
        assert!(err.to_string().contains("C_11"), "{err}");
    }

    #[test]
    fn measured_box_row_from_reference_values() {
        // Parameters printed for the measured box; first row of the expansion.
        let m1 = 0.808687;
        let n1 = 0.646969;
        let c11 = 0.576785;
        let p = LocalBoxParams::new(
            [m1, 0.808687, 0.5],
            [n1, 0.646969, 0.5],
            [
                [c11, 0.646188, 0.464447],
                [0.646188, 0.576785, 0.344239],
                [0.421634, 0.225335, 0.08],
            ],
        )
        .unwrap();
        let b = p.expand().unwrap();
        let row = b.row(0, 0);
        assert_abs_diff_eq!(row[0], 0.576785, epsilon = 1e-9);
        assert_abs_diff_eq!(row[1], 0.231902, epsilon = 1e-6);
        assert_abs_diff_eq!(row[2], 0.070184, epsilon = 1e-6);
        assert_abs_diff_eq!(row[3], 0.121129, epsilon = 1e-6);
    }

    #[test]
    fn payoffs_of_all_zero_strategy_pair() {
        let game = GameDefinition::reference();
        let p = LocalBoxParams::new([1.0; 3], [1.0; 3], [[1.0; 3]; 3]).unwrap();
        let pay = game.payoffs(&p.expand().unwrap());
        assert_abs_diff_eq!(pay.f_a, 6.0 / 27.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pay.f_b, 9.0 / 27.0, epsilon = 1e-14);
    }

    #[test]
    fn payoffs_zero_for_zero_utilities() {
        let zero = Rational64::from_integer(0);
        let game =
            GameDefinition::with_uniform_prior(UtilityTable::from_fn(|_, _, _, _| (zero, zero)));
        let mut rng = rand::rngs::mock::StepRng::new(42, 0x9e3779b97f4a7c15);
        let p = LocalBoxParams::sample(&mut rng);
        let pay = game.payoffs(&p.expand().unwrap());
        assert_eq!(pay.f_a, 0.0);
        assert_eq!(pay.f_b, 0.0);
    }

    #[test]
    fn closed_form_matches_table_corners() {
        let all_one = LocalBoxParams::new([1.0; 3], [1.0; 3], [[1.0; 3]; 3]).unwrap();
        let pay = closed_form_payoffs(&all_one);
        assert_abs_diff_eq!(pay.f_a, 2.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pay.f_b, 3.0 / 9.0, epsilon = 1e-15);

        let all_zero = LocalBoxParams::new([0.0; 3], [0.0; 3], [[0.0; 3]; 3]).unwrap();
        let pay = closed_form_payoffs(&all_zero);
        assert_abs_diff_eq!(pay.f_a, 6.0 / 27.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pay.f_b, 9.0 / 27.0, epsilon = 1e-15);
    }

    #[test]
    fn prior_must_sum_to_one() {
        let mut prior = [[Rational64::new(1, 9); 3]; 3];
        prior[0][0] = Rational64::new(1, 3);
        assert!(GameDefinition::new(prior, reference_utilities()).is_err());
    }

    #[test]
    fn box_rejects_signaling() {
        // Alice's marginal under A1 depends on Bob's question.
        let mut entries = [[0.25; 4]; 9];
        entries[0] = [0.5, 0.5, 0.0, 0.0];
        assert!(ProbabilityBox::new(entries).is_err());
    }

    #[test]
    fn local_params_json_shape() {
        let p = LocalBoxParams::new([1.0; 3], [1.0; 3], [[1.0; 3]; 3]).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert!(json.get("M").is_some());
        assert!(json.get("N").is_some());
        assert_eq!(json["C"].as_array().unwrap().len(), 3);
        let back: LocalBoxParams = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn box_json_round_trip_carries_labels() {
        let p = LocalBoxParams::new([0.5; 3], [0.5; 3], [[0.25; 3]; 3]).unwrap();
        let b = p.expand().unwrap();
        let json = serde_json::to_value(&b).unwrap();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0]["pair"], "A1B1");
        assert_eq!(rows[5]["pair"], "A2B3");
        let back: ProbabilityBox = serde_json::from_value(json).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn payoff_pair_json_field_names() {
        let pay = PayoffPair::new(0.25, 0.5);
        let json = serde_json::to_value(pay).unwrap();
        assert_eq!(json["F_A"], 0.25);
        assert_eq!(json["F_B"], 0.5);
        assert_eq!(json["welfare"], 0.75);
    }
}
