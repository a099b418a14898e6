use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ecs_teleport::analysis::{gap_curve, surface_grids, sweep_surface, SURFACE_ALPHA_SQ};
use ecs_teleport::cat_algebra::angles_to_qubit;
use ecs_teleport::ecs::{concurrence_closed, concurrence_numeric, qubit_amplitudes};
use ecs_teleport::format::{fmt_sig, gap_csv, surface_csv};
use ecs_teleport::protocol::{assemble, average_fidelity, select_strategy};
use ecs_teleport::verify::{self, VerifyConfig};
use ecs_teleport::{EcsParams, StrategyId};

#[derive(Parser)]
#[command(
    name = "ecs-teleport",
    version,
    about = "Teleportation fidelity of cat-state qubits over entangled coherent channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Panel {
    A,
    B,
    C,
    D,
}

#[derive(clap::Args)]
struct Output {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(clap::Args)]
struct Grid {
    /// θ samples over [0, π]
    #[arg(long = "grid-theta", default_value_t = 37)]
    theta: usize,
    /// φ samples over [0, 2π]
    #[arg(long = "grid-phi", default_value_t = 73)]
    phi: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Average fidelity and branch table for one channel and input state
    Fidelity {
        #[arg(long)]
        alpha_sq: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        xi: f64,
        /// Emit JSON instead of the text report
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Data for one panel of the worst-case fidelity figure
    Fig2 {
        #[arg(long, value_enum)]
        panel: Panel,
        #[command(flatten)]
        grid: Grid,
        /// Samples of the gap curve (panel d, |α|² ∈ [0, 5])
        #[arg(long, default_value_t = 501)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Worst-case fidelity surface over (θ, φ) at a given |α|²
    Sweep {
        #[arg(long)]
        alpha_sq: f64,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form worst-case fidelities and their gap versus |α|²
    Gap {
        #[arg(long, default_value_t = 0.01)]
        from: f64,
        #[arg(long, default_value_t = 5.0)]
        to: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Channel concurrence, closed form and numeric
    Concurrence {
        #[arg(long)]
        alpha_sq: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        phi: f64,
    },
    /// Cross-check closed forms against each other and the Fock oracle
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random tuples
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Pin |α|² instead of drawing it from [0.1, 3]
        #[arg(long)]
        alpha_sq: Option<f64>,
        /// Force the Fock cutoff
        #[arg(long)]
        cutoff: Option<usize>,
        /// Tolerance for analytic vs oracle average fidelity
        #[arg(long, default_value_t = verify::ORACLE_FIDELITY_TOL)]
        tol: f64,
    },
}

enum Failure {
    Verification,
    Domain(String),
    Io(String),
}

impl From<ecs_teleport::Error> for Failure {
    fn from(e: ecs_teleport::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn emit(output: &Output, csv: String, json: String) -> Result<(), Failure> {
    let body = match output.format {
        Format::Csv => csv,
        Format::Json => json + "\n",
    };
    match &output.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn surface(alpha_sq: f64, grid: &Grid, output: &Output) -> Result<(), Failure> {
    let (thetas, phis) = surface_grids(grid.theta, grid.phi);
    let records = sweep_surface(alpha_sq, &thetas, &phis)?;
    emit(output, surface_csv(&records), to_json(&records))
}

fn gap(from: f64, to: f64, steps: usize, output: &Output) -> Result<(), Failure> {
    let curve = gap_curve(from, to, steps)?;
    let peak = curve.peak();
    eprintln!(
        "max d = {} at alpha_sq = {}",
        fmt_sig(peak.d),
        fmt_sig(peak.alpha_sq)
    );
    emit(output, gap_csv(&curve.points), to_json(&curve))
}

fn fidelity(
    alpha_sq: f64,
    theta: f64,
    phi: f64,
    omega: f64,
    xi: f64,
    format: Option<Format>,
) -> Result<(), Failure> {
    let p = EcsParams::from_mean_photon_number(alpha_sq, theta, phi)?;
    let q = angles_to_qubit(omega, xi)?;
    let f1 = average_fidelity(omega, xi, &p, StrategyId::S1)?;
    let f2 = average_fidelity(omega, xi, &p, StrategyId::S2)?;
    let strategy = select_strategy(phi);
    let table = assemble(&q, &p, strategy)?;
    let concurrence = concurrence_closed(&p);

    match format {
        Some(Format::Json) => {
            let v = serde_json::json!({
                "alpha_sq": alpha_sq, "theta": theta, "phi": phi, "omega": omega, "xi": xi,
                "f_av_s1": f1, "f_av_s2": f2,
                "strategy": strategy,
                "f_av": if strategy == StrategyId::S1 { f1 } else { f2 },
                "branches": table.branches,
                "concurrence": concurrence,
            });
            println!("{}", to_json(&v));
        }
        Some(Format::Csv) => {
            println!("label,prob,fidelity");
            for b in &table.branches {
                println!("{},{},{}", b.label, fmt_sig(b.prob), fmt_sig(b.fidelity));
            }
        }
        None => {
            let mut out = String::new();
            let selected = if strategy == StrategyId::S1 { f1 } else { f2 };
            writeln!(out, "F_av(S1)     {}", fmt_sig(f1)).unwrap();
            writeln!(out, "F_av(S2)     {}", fmt_sig(f2)).unwrap();
            writeln!(out, "strategy     {strategy}").unwrap();
            writeln!(out, "F_av         {}", fmt_sig(selected)).unwrap();
            writeln!(out, "concurrence  {}", fmt_sig(concurrence)).unwrap();
            writeln!(out, "{:<10} {:<20} F", "branch", "P").unwrap();
            for b in &table.branches {
                writeln!(
                    out,
                    "{:<10} {:<20} {}",
                    b.label.as_str(),
                    fmt_sig(b.prob),
                    fmt_sig(b.fidelity)
                )
                .unwrap();
            }
            let total: f64 = table.branches.iter().map(|b| b.prob).sum();
            writeln!(out, "sum P        {}", fmt_sig(total)).unwrap();
            print!("{out}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Fidelity {
            alpha_sq,
            theta,
            phi,
            omega,
            xi,
            format,
        } => fidelity(alpha_sq, theta, phi, omega, xi, format),
        Command::Fig2 {
            panel,
            grid,
            steps,
            output,
        } => match panel {
            Panel::A => surface(SURFACE_ALPHA_SQ[0], &grid, &output),
            Panel::B => surface(SURFACE_ALPHA_SQ[1], &grid, &output),
            Panel::C => surface(SURFACE_ALPHA_SQ[2], &grid, &output),
            Panel::D => gap(0.0, 5.0, steps, &output),
        },
        Command::Sweep {
            alpha_sq,
            grid,
            output,
        } => surface(alpha_sq, &grid, &output),
        Command::Gap {
            from,
            to,
            steps,
            output,
        } => gap(from, to, steps, &output),
        Command::Concurrence {
            alpha_sq,
            theta,
            phi,
        } => {
            let p = EcsParams::from_mean_photon_number(alpha_sq, theta, phi)?;
            println!("closed   {}", fmt_sig(concurrence_closed(&p)));
            println!(
                "numeric  {}",
                fmt_sig(concurrence_numeric(&qubit_amplitudes(&p))?)
            );
            Ok(())
        }
        Command::Verify {
            seed,
            count,
            alpha_sq,
            cutoff,
            tol,
        } => {
            let report = verify::run(&VerifyConfig {
                seed,
                count,
                alpha_sq,
                cutoff,
                oracle_tol: tol,
            });
            print!("{}", report.render());
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
