//! Command-line front end: classical table, quantum evaluation, inequality
//! reports, welfare optimization, and the one-shot reproduction suite.
//!
//! Exit codes: 0 on success, 1 on failed checks or invalid inputs, 2 on
//! usage errors. All angles are radians; degree input is not accepted.

pub mod report;

use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bellgame::classical::build_payoff_table;
use bellgame::game::{payoffs_from_box, GameDefinition, ProbabilityBox, UtilityTable};
use bellgame::inequality::{
    i3322_coefficient_form, i3322_full_form, i3322_local_form, max_chsh_horodecki, I3322Value,
};
use bellgame::optimizer::{
    maximize_s_with_starts, AngleConfiguration, Restriction, DEFAULT_BUDGET, DEFAULT_SEED,
};
use bellgame::quantum::{
    box_from_state, reference_settings, reference_state, singlet_state, TwoQubitState,
};

#[derive(Parser)]
#[command(
    name = "bellgame",
    version,
    about = "Bayesian games on the 3-setting/2-outcome Bell scenario"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 8x8 classical payoff table (x27 integers)
    ClassicalTable {
        /// Output format
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Also list the pure Nash equilibrium cells
        #[arg(long)]
        equilibria: bool,
    },
    /// Probability box, I3322 value and payoffs of a state under settings
    Quantum {
        /// State source: "paper", "singlet", or a path to a state JSON file
        #[arg(long, default_value = "paper")]
        state: String,
        /// Angle source: "paper" or a path to an angles JSON file (radians)
        #[arg(long, default_value = "paper")]
        angles: String,
    },
    /// Evaluate the I3322 functional or the CHSH/Horodecki criterion
    Inequality {
        /// Which inequality to evaluate
        #[arg(long, value_enum)]
        kind: InequalityKind,
        /// State source: "paper", "singlet", or a path to a state JSON file
        #[arg(long, default_value = "paper")]
        state: String,
        /// Angle source: "paper" or a path to an angles JSON file (radians)
        #[arg(long, default_value = "paper")]
        angles: String,
        /// Evaluate I3322 directly on a probability-box JSON file instead
        #[arg(long = "box")]
        box_file: Option<PathBuf>,
    },
    /// Search for the welfare-maximizing measurement configuration
    Optimize {
        /// State source: "paper", "singlet", or a path to a state JSON file
        #[arg(long, default_value = "paper")]
        state: String,
        /// Measurement family to search over
        #[arg(long, value_enum, default_value_t = RestrictionArg::Plane)]
        restriction: RestrictionArg,
        /// Evaluation budget (one evaluation = one box build)
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Seed of the deterministic search stream
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the full reproduction suite; exit 0 only if every check passes
    Reproduce {
        /// Output format for the report
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Corrupt one utility entry before running (fault-injection hook)
        #[arg(long, hide = true)]
        inject_utility_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum InequalityKind {
    I3322,
    Chsh,
}

#[derive(Clone, Copy, ValueEnum)]
enum RestrictionArg {
    /// Polar angles only, all azimuthal angles zero
    Plane,
    /// Full Bloch sphere
    Full,
}

impl From<RestrictionArg> for Restriction {
    fn from(arg: RestrictionArg) -> Self {
        match arg {
            RestrictionArg::Plane => Restriction::PlanePhiZero,
            RestrictionArg::Full => Restriction::FullBloch,
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(all_passed) => {
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ClassicalTable { format, equilibria } => cmd_classical_table(format, equilibria),
        Command::Quantum { state, angles } => cmd_quantum(&state, &angles),
        Command::Inequality {
            kind,
            state,
            angles,
            box_file,
        } => cmd_inequality(kind, &state, &angles, box_file.as_deref()),
        Command::Optimize {
            state,
            restriction,
            budget,
            seed,
        } => cmd_optimize(&state, restriction.into(), budget, seed),
        Command::Reproduce {
            format,
            inject_utility_fault,
        } => cmd_reproduce(format, inject_utility_fault),
    }
}

fn load_state(source: &str) -> Result<TwoQubitState> {
    match source {
        "paper" => Ok(reference_state()),
        "singlet" => Ok(singlet_state()),
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading state file {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("parsing state file {path}"))
        }
    }
}

fn load_angles(source: &str) -> Result<AngleConfiguration> {
    match source {
        "paper" => {
            let (alice, bob) = reference_settings();
            Ok(AngleConfiguration::new(alice, bob))
        }
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading angles file {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("parsing angles file {path}"))
        }
    }
}

fn load_box(path: &std::path::Path) -> Result<ProbabilityBox> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading box file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing box file {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_classical_table(format: TableFormat, equilibria: bool) -> Result<bool> {
    let table = build_payoff_table(&GameDefinition::reference());
    match format {
        TableFormat::Csv => {
            print!("{}", table.to_csv().map_err(|e| anyhow!(e))?);
            if equilibria {
                let report = table.nash_equilibria();
                println!("# equilibria (weak best responses):");
                for cell in &report.cells {
                    let (a, b) = table
                        .cell_scaled(cell.row, cell.col)
                        .map_err(|e| anyhow!(e))?;
                    println!("# ({},{}) payoff {a},{b}", cell.row, cell.col);
                }
            }
        }
        TableFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                row: String,
                cells: Vec<(i64, i64)>,
            }
            #[derive(Serialize)]
            struct TableJson {
                scale_denominator: i64,
                rows: Vec<Row>,
                #[serde(skip_serializing_if = "Option::is_none")]
                equilibria: Option<bellgame::EquilibriumReport>,
            }
            let strategies = bellgame::Strategy::all();
            let rows = strategies
                .iter()
                .map(|&r| {
                    Ok(Row {
                        row: r.to_string(),
                        cells: strategies
                            .iter()
                            .map(|&c| table.cell_scaled(r, c).map_err(|e| anyhow!(e)))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            print_json(&TableJson {
                scale_denominator: bellgame::classical::TABLE_SCALE,
                rows,
                equilibria: equilibria.then(|| table.nash_equilibria()),
            })?;
        }
    }
    Ok(true)
}

fn cmd_quantum(state_source: &str, angles_source: &str) -> Result<bool> {
    let state = load_state(state_source)?;
    let config = load_angles(angles_source)?;
    let measured = box_from_state(&state, &config.alice, &config.bob).map_err(|e| anyhow!(e))?;
    let s = i3322_local_form(&measured.local_params().map_err(|e| anyhow!(e))?).s;
    let payoffs = payoffs_from_box(&measured, &GameDefinition::reference());

    #[derive(Serialize)]
    struct QuantumOutput {
        #[serde(rename = "box")]
        probability_box: ProbabilityBox,
        s: f64,
        #[serde(rename = "F_A")]
        f_a: f64,
        #[serde(rename = "F_B")]
        f_b: f64,
        welfare: f64,
    }
    print_json(&QuantumOutput {
        probability_box: measured,
        s,
        f_a: payoffs.f_a,
        f_b: payoffs.f_b,
        welfare: payoffs.welfare,
    })?;
    Ok(true)
}

fn cmd_inequality(
    kind: InequalityKind,
    state_source: &str,
    angles_source: &str,
    box_file: Option<&std::path::Path>,
) -> Result<bool> {
    match kind {
        InequalityKind::I3322 => {
            let measured = match box_file {
                Some(path) => load_box(path)?,
                None => {
                    let state = load_state(state_source)?;
                    let config = load_angles(angles_source)?;
                    box_from_state(&state, &config.alice, &config.bob).map_err(|e| anyhow!(e))?
                }
            };
            let params = measured.local_params().map_err(|e| anyhow!(e))?;
            let forms = [
                i3322_local_form(&params),
                i3322_full_form(&measured),
                i3322_coefficient_form(&measured),
            ];
            let max_pairwise_discrepancy = forms
                .iter()
                .flat_map(|a| forms.iter().map(move |b| (a.s - b.s).abs()))
                .fold(0.0, f64::max);

            #[derive(Serialize)]
            struct I3322Output {
                forms: [I3322Value; 3],
                max_pairwise_discrepancy: f64,
            }
            print_json(&I3322Output {
                forms,
                max_pairwise_discrepancy,
            })?;
        }
        InequalityKind::Chsh => {
            let state = load_state(state_source)?;
            print_json(&max_chsh_horodecki(&state))?;
        }
    }
    Ok(true)
}

fn cmd_optimize(
    state_source: &str,
    restriction: Restriction,
    budget: u64,
    seed: u64,
) -> Result<bool> {
    let state = load_state(state_source)?;
    let result =
        maximize_s_with_starts(&state, restriction, budget, seed, &[]).map_err(|e| anyhow!(e))?;
    print_json(&result)?;
    Ok(true)
}

fn cmd_reproduce(format: ReportFormat, inject_utility_fault: bool) -> Result<bool> {
    let game = if inject_utility_fault {
        // Flip one utility entry, as a typo would: u_A(0,0|A1,B1) 2/3 -> 1/3.
        let base = bellgame::game::reference_utilities();
        let corrupted = UtilityTable::from_fn(|x, y, a, b| {
            let (u_a, u_b) = base.utilities(x, y, a, b);
            if (x, y, a, b) == (0, 0, 0, 0) {
                (num_rational::Rational64::new(1, 3), u_b)
            } else {
                (u_a, u_b)
            }
        });
        GameDefinition::with_uniform_prior(corrupted)
    } else {
        GameDefinition::reference()
    };
    let report = report::run_reference_suite(&game);
    match format {
        ReportFormat::Text => print!("{}", report.render_text()),
        ReportFormat::Json => print_json(&report)?,
    }
    Ok(report.overall_pass)
}
