use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fhl_core::geometry::total_cost;
use fhl_core::io::{emit_svg, parse_instance, solution_value};
use fhl_core::oracle::{oracle_solve, verify_counterexample, DEFAULT_REFINE_ITERS, DEFAULT_RESOLUTION};
use fhl_core::table::reproduce_table;
use fhl_core::{solve, solve_vertex_only, Instance, Solution};

/// Place a facility and a fixed-length highway to minimize total weighted
/// L1 travel time.
#[derive(Debug, Parser)]
#[command(name = "fhl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve over the full candidate set.
    Solve { instance: PathBuf },
    /// Solve with a grid-vertex endpoint only.
    VertexOnly { instance: PathBuf },
    /// Brute-force angular search with a certified gap.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: f64,
        #[arg(long, default_value_t = DEFAULT_REFINE_ITERS)]
        refine_iters: usize,
    },
    /// Full and vertex-only costs side by side.
    Compare { instance: PathBuf },
    /// Check the built-in five-point instance where no optimum has a vertex endpoint.
    Counterexample {
        #[arg(long)]
        json: bool,
    },
    /// Costs of the five-point instance over a grid of lengths and speeds.
    Table {
        #[arg(long)]
        json: bool,
    },
    /// Solve and write an SVG drawing.
    Plot {
        instance: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

/// A command that failed after argument parsing; exits with status 1.
struct Failure {
    message: String,
}

impl From<fhl_core::Error> for Failure {
    fn from(e: fhl_core::Error) -> Self {
        Failure {
            message: e.to_string(),
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })?;
    parse_instance(&text).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
    })
}

/// Re-evaluates the cost at the solution's endpoints before it is printed.
fn rederive(inst: &Instance, mut sol: Solution) -> Solution {
    sol.cost = total_cost(inst, sol.facility, sol.entry);
    sol
}

fn print_json(doc: &Value) {
    println!("{}", serde_json::to_string_pretty(doc).expect("document serializes"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { instance } => {
            let inst = read_instance(&instance)?;
            let sol = rederive(&inst, solve(&inst)?);
            print_json(&solution_value(&inst, &sol));
        }
        Command::VertexOnly { instance } => {
            let inst = read_instance(&instance)?;
            let sol = rederive(&inst, solve_vertex_only(&inst)?);
            print_json(&solution_value(&inst, &sol));
        }
        Command::Oracle {
            instance,
            resolution,
            refine_iters,
        } => {
            let inst = read_instance(&instance)?;
            let mut result = oracle_solve(&inst, resolution, refine_iters)?;
            result.solution = rederive(&inst, result.solution);
            print_json(&result.to_json(&inst));
        }
        Command::Compare { instance } => {
            let inst = read_instance(&instance)?;
            let full = rederive(&inst, solve(&inst)?);
            let vertex = rederive(&inst, solve_vertex_only(&inst)?);
            print_json(&json!({
                "full": solution_value(&inst, &full),
                "vertex_only": solution_value(&inst, &vertex),
                "gap": vertex.cost - full.cost,
                "vertex_only_worse": vertex.cost > full.cost,
            }));
        }
        Command::Counterexample { json } => {
            let report = verify_counterexample()?;
            if json {
                print_json(&report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if !report.passed() {
                return Err(Failure {
                    message: "counterexample verification failed".into(),
                });
            }
        }
        Command::Table { json } => {
            let report = reproduce_table()?;
            if json {
                print_json(&report.to_json());
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Plot { instance, output } => {
            let inst = read_instance(&instance)?;
            let sol = rederive(&inst, solve(&inst)?);
            fs::write(&output, emit_svg(&inst, &sol)).map_err(|e| Failure {
                message: format!("{}: {e}", output.display()),
            })?;
            print_json(&solution_value(&inst, &sol));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(1)
        }
    }
}
