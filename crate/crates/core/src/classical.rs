//! Deterministic classical strategies, the exact 8x8 payoff table, pure Nash
//! equilibria, and the classical bounds obtained by exhausting all 64
//! deterministic strategy pairs.
//!
//! The table is held in exact rationals so the x27 integer comparison and the
//! equilibrium search need no tolerances at all.

use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{GameDefinition, LocalBoxParams, PayoffPair, QUESTIONS};
use crate::inequality::i3322_local_form;

/// A deterministic answer strategy: the player's three pre-decided answers,
/// read as a binary string (most significant bit = question 1), equal the
/// strategy index. `g0` answers 0 everywhere; `g7` answers 1 everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Strategy(u8);

impl Strategy {
    pub fn new(index: u8) -> Result<Self> {
        if index > 7 {
            return Err(Error::InvalidArgument(format!(
                "strategy index {index} outside 0..=7"
            )));
        }
        Ok(Self(index))
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    /// Answer to each of the three questions; `answers()[0]` answers question 1.
    pub fn answers(&self) -> [u8; 3] {
        [(self.0 >> 2) & 1, (self.0 >> 1) & 1, self.0 & 1]
    }

    pub fn answer(&self, question: usize) -> u8 {
        self.answers()[question]
    }

    /// All eight strategies, `g0..g7`.
    pub fn all() -> [Strategy; 8] {
        std::array::from_fn(|i| Strategy(i as u8))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The box parameterization of a deterministic strategy pair:
/// `M_i = 1` iff Alice answers 0 to question i, `N_j` likewise for Bob,
/// and `C_ij = M_i N_j`.
pub fn strategy_to_local_params(alice: Strategy, bob: Strategy) -> LocalBoxParams {
    let m: [f64; 3] = std::array::from_fn(|i| if alice.answer(i) == 0 { 1.0 } else { 0.0 });
    let n: [f64; 3] = std::array::from_fn(|j| if bob.answer(j) == 0 { 1.0 } else { 0.0 });
    let c: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| m[i] * n[j]));
    LocalBoxParams::new(m, n, c).expect("deterministic parameters are always valid")
}

/// The 8x8 table of exact average payoffs, one cell per strategy pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTable {
    // cells[alice][bob] = (F_A, F_B), unscaled exact rationals.
    cells: [[(Rational64, Rational64); 8]; 8],
}

/// Denominator used for integer display of the reference game's table.
pub const TABLE_SCALE: i64 = 27;

impl PayoffTable {
    pub fn cell_exact(&self, alice: Strategy, bob: Strategy) -> (Rational64, Rational64) {
        self.cells[alice.index() as usize][bob.index() as usize]
    }

    pub fn cell(&self, alice: Strategy, bob: Strategy) -> PayoffPair {
        let (a, b) = self.cell_exact(alice, bob);
        PayoffPair::new(a.to_f64().unwrap(), b.to_f64().unwrap())
    }

    /// The cell payoffs times 27, which are integers for the reference game.
    pub fn cell_scaled(&self, alice: Strategy, bob: Strategy) -> Result<(i64, i64)> {
        let (a, b) = self.cell_exact(alice, bob);
        let scale = Rational64::from_integer(TABLE_SCALE);
        let (sa, sb) = (a * scale, b * scale);
        if !sa.is_integer() || !sb.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "cell ({alice}, {bob}) payoffs x{TABLE_SCALE} are not integers: {sa}, {sb}"
            )));
        }
        Ok((sa.to_integer(), sb.to_integer()))
    }

    /// CSV rendering of the x27 integer table, rows `g0..g7`, pair cells
    /// quoted as `"a,b"`. Fails if some cell is not integral at this scale.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str("# payoff entries are (F_A,F_B) scaled by 27; a factor of 1/27 applies\n");
        out.push_str(&format!(
            ",{}\n",
            Strategy::all().map(|s| s.to_string()).join(",")
        ));
        for alice in Strategy::all() {
            out.push_str(&alice.to_string());
            for bob in Strategy::all() {
                let (a, b) = self.cell_scaled(alice, bob)?;
                out.push_str(&format!(",\"{a},{b}\""));
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Pure-strategy Nash equilibria under weak best responses: a cell
    /// `(r, c)` qualifies iff no row deviation improves `F_A` and no column
    /// deviation improves `F_B`. Comparisons are exact.
    pub fn nash_equilibria(&self) -> EquilibriumReport {
        let strategies = Strategy::all();
        let mut cells = Vec::new();
        for r in strategies {
            for c in strategies {
                let (f_a, f_b) = self.cell_exact(r, c);
                let row_best = strategies
                    .iter()
                    .all(|&alt| self.cell_exact(alt, c).0 <= f_a);
                let col_best = strategies
                    .iter()
                    .all(|&alt| self.cell_exact(r, alt).1 <= f_b);
                if row_best && col_best {
                    cells.push(EquilibriumCell {
                        row: r,
                        col: c,
                        payoff: self.cell(r, c),
                    });
                }
            }
        }
        let max_welfare_over_all_cells = cells
            .iter()
            .map(|c| c.payoff.welfare)
            .fold(None, |acc: Option<f64>, w| {
                Some(acc.map_or(w, |a| a.max(w)))
            });
        EquilibriumReport {
            cells,
            max_welfare_over_all_cells,
        }
    }

    /// Maximum of `F_A + F_B` over all 64 cells, exact.
    pub fn welfare_bound_exact(&self) -> Rational64 {
        let mut best = self.cells[0][0].0 + self.cells[0][0].1;
        for row in &self.cells {
            for &(a, b) in row {
                let w = a + b;
                if w > best {
                    best = w;
                }
            }
        }
        best
    }
}

/// One equilibrium cell and its payoffs.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumCell {
    pub row: Strategy,
    pub col: Strategy,
    pub payoff: PayoffPair,
}

/// The set of pure Nash equilibria of a payoff table.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub cells: Vec<EquilibriumCell>,
    /// Highest welfare among the listed cells; `None` when the set is empty.
    pub max_welfare_over_all_cells: Option<f64>,
}

impl EquilibriumReport {
    pub fn contains(&self, row: Strategy, col: Strategy) -> bool {
        self.cells.iter().any(|c| c.row == row && c.col == col)
    }
}

/// Builds the 8x8 table by exact summation of the utility entries each
/// strategy pair selects: `F = sum_{x,y} p(x,y) u(a_x, b_y | x, y)`.
pub fn build_payoff_table(game: &GameDefinition) -> PayoffTable {
    let zero = Rational64::from_integer(0);
    let mut cells = [[(zero, zero); 8]; 8];
    for alice in Strategy::all() {
        for bob in Strategy::all() {
            let mut f_a = zero;
            let mut f_b = zero;
            for x in 0..QUESTIONS {
                for y in 0..QUESTIONS {
                    let (u_a, u_b) =
                        game.utilities()
                            .utilities(x, y, alice.answer(x), bob.answer(y));
                    let p = game.prior(x, y);
                    f_a += p * u_a;
                    f_b += p * u_b;
                }
            }
            cells[alice.index() as usize][bob.index() as usize] = (f_a, f_b);
        }
    }
    PayoffTable { cells }
}

/// Maximum welfare over all 64 deterministic cells; `15/27` for the
/// reference game.
pub fn classical_welfare_bound(table: &PayoffTable) -> f64 {
    table.welfare_bound_exact().to_f64().unwrap()
}

/// Maximum of the I3322 value over all 64 deterministic strategy pairs.
///
/// The deterministic boxes are the vertices of the local polytope and S is
/// linear, so this maximum bounds S for every local box. The enumeration is
/// exact (the parameters are 0/1) and returns exactly 0.
pub fn classical_max_s() -> f64 {
    let mut best = f64::NEG_INFINITY;
    for alice in Strategy::all() {
        for bob in Strategy::all() {
            let params = strategy_to_local_params(alice, bob);
            best = best.max(i3322_local_form(&params).s);
        }
    }
    best
}
