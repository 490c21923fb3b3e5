//! A two-player Bayesian game on the 3-setting/2-outcome Bell scenario.
//!
//! The library models one specific game in which a mixed entangled two-qubit
//! state, used as shared advice, pays both players strictly more than any
//! classical pure-strategy equilibrium. It provides:
//!
//! - the game definition: utility tables, priors, probability boxes, payoffs
//!   ([`game`]);
//! - exhaustive classical analysis: the exact 8x8 payoff table, pure Nash
//!   equilibria, and the classical welfare and I3322 bounds ([`classical`]);
//! - two-qubit states, projective measurements, and Born-rule boxes
//!   ([`quantum`]);
//! - the I3322 functional in its three equivalent presentations and the
//!   Horodecki CHSH criterion ([`inequality`]);
//! - a deterministic multi-start derivative-free search for the
//!   welfare-maximizing measurement configuration ([`optimizer`]).
//!
//! Social welfare and the I3322 value `S` are linked by
//! `F_A + F_B = (2S + 5)/9`, which ties the game's payoffs to Bell-inequality
//! violation: any box with `S > 0` beats every classical equilibrium's
//! welfare.

pub mod classical;
pub mod error;
pub mod game;
pub mod inequality;
pub mod optimizer;
pub mod qmath;
pub mod quantum;

pub use classical::{EquilibriumReport, PayoffTable, Strategy};
pub use error::{Error, Result};
pub use game::{GameDefinition, LocalBoxParams, PayoffPair, ProbabilityBox, UtilityTable};
pub use inequality::{ChshReport, I3322Form, I3322Value};
pub use optimizer::{AngleConfiguration, OptimizationResult, Restriction};
pub use qmath::{ComplexMatrix, HermitianCheckReport};
pub use quantum::{MeasurementSetting, MeasurementTriple, TwoQubitState};
