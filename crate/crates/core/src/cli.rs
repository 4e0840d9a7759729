//! Command-line front end.
//!
//! Exit codes: 0 success (or `HOLDS`), 1 I/O failure, 2 usage error,
//! 3 a falsification or closed-form check that `FAILS`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::dynamics::{counterexample_initial, simulate_trajectory, TimeGrid, Trajectory};
use crate::error::Error;
use crate::falsifier::{falsify, AnsatzParams, Verdict, DEFAULT_TOLERANCE};
use crate::hamiltonian::HamiltonianParams;
use crate::qstate::{BlochAngles, TwoQubitState};
use crate::schmidt::{entanglement_entropy, schmidt_decompose, schmidt_fixed_basis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILS: i32 = 3;

/// Closed-form agreement threshold reported by `counterexample`.
pub const CLOSED_FORM_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Evolve a state and write a trajectory CSV
    Evolve,
    /// Isotropic-exchange counterexample with closed-form reference columns
    Counterexample,
    /// Test the product-precession ansatz against exact evolution
    Falsify,
    /// Schmidt decomposition and entropy of a state file
    Schmidt,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinpair",
    version,
    about = "Exact entanglement dynamics of two interacting spin-1/2 particles",
    allow_negative_numbers = true
)]
struct Args {
    command: Command,
    #[arg(long, default_value_t = 0.0)]
    omega1: f64,
    #[arg(long, default_value_t = 0.0)]
    omega2: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.25)]
    ax: f64,
    #[arg(long, default_value_t = 0.25)]
    ay: f64,
    #[arg(long, default_value_t = 0.25)]
    az: f64,
    #[arg(long, default_value_t = 0.0)]
    t_start: f64,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 201)]
    samples: usize,
    /// Counterexample mixing angle a in [0, π]
    #[arg(long = "a")]
    a: Option<f64>,
    /// Schmidt angle of an inline state
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n_theta: Option<f64>,
    #[arg(long)]
    n_phi: Option<f64>,
    #[arg(long)]
    m_theta: Option<f64>,
    #[arg(long)]
    m_phi: Option<f64>,
    #[arg(long)]
    state_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Schmidt(AnsatzParams),
    File(PathBuf),
    Counterexample(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub hamiltonian: HamiltonianParams,
    /// Absent only for `schmidt`.
    pub grid: Option<TimeGrid>,
    pub state_source: StateSource,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub tolerance: f64,
}

#[derive(Debug)]
pub enum CliError {
    /// Help or version text requested; not an error.
    Info(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Info(s) | CliError::Usage(s) => f.write_str(s),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn from_lib(flag: &str, e: Error) -> CliError {
    usage(format!("--{flag}: {e}"))
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => usage(e.to_string()),
        }
    })?;

    let hamiltonian = HamiltonianParams::new(
        args.omega1,
        args.omega2,
        args.lambda,
        args.ax,
        args.ay,
        args.az,
    )
    .map_err(|e| usage(e.to_string()))?;

    let inline_given = [
        args.alpha,
        args.beta,
        args.n_theta,
        args.n_phi,
        args.m_theta,
        args.m_phi,
    ]
    .iter()
    .any(Option::is_some);
    let mut sources = Vec::new();
    if inline_given {
        sources.push("--alpha/--beta/--n-*/--m-*");
    }
    if args.state_file.is_some() {
        sources.push("--state-file");
    }
    if args.a.is_some() {
        sources.push("--a");
    }
    if sources.len() > 1 {
        return Err(usage(format!(
            "conflicting state sources: {}",
            sources.join(", ")
        )));
    }

    let state_source = if inline_given {
        let alpha = args
            .alpha
            .ok_or_else(|| usage("--alpha is required for an inline Schmidt state"))?;
        let n = BlochAngles::new(args.n_theta.unwrap_or(0.0), args.n_phi.unwrap_or(0.0))
            .map_err(|e| from_lib("n-theta", e))?;
        let m = BlochAngles::new(args.m_theta.unwrap_or(0.0), args.m_phi.unwrap_or(0.0))
            .map_err(|e| from_lib("m-theta", e))?;
        let ap = AnsatzParams::new(alpha, args.beta.unwrap_or(0.0), n, m)
            .map_err(|e| from_lib("alpha", e))?;
        Some(StateSource::Schmidt(ap))
    } else if let Some(path) = args.state_file.clone() {
        Some(StateSource::File(path))
    } else if let Some(a) = args.a {
        counterexample_initial(a).map_err(|e| from_lib("a", e))?;
        Some(StateSource::Counterexample(a))
    } else {
        None
    };

    let state_source = match (args.command, state_source) {
        (Command::Counterexample, Some(s @ StateSource::Counterexample(_))) => s,
        (Command::Counterexample, _) => {
            return Err(usage("counterexample requires --a and no other state source"))
        }
        (Command::Falsify, Some(s @ StateSource::Schmidt(_))) => s,
        (Command::Falsify, _) => {
            return Err(usage(
                "falsify requires an inline Schmidt state (--alpha, --beta, --n-theta, --n-phi, --m-theta, --m-phi)",
            ))
        }
        (Command::Schmidt, Some(s @ StateSource::File(_))) => s,
        (Command::Schmidt, _) => return Err(usage("schmidt requires --state-file")),
        (Command::Evolve, Some(s)) => s,
        (Command::Evolve, None) => {
            return Err(usage(
                "evolve requires a state source: --state-file, --a, or --alpha with Bloch angles",
            ))
        }
    };

    if args.command == Command::Counterexample && hamiltonian.isotropic_coupling().is_none() {
        return Err(usage(
            "counterexample requires --omega1 0 --omega2 0 and --ax = --ay = --az",
        ));
    }

    let grid = if args.command == Command::Schmidt {
        None
    } else {
        let t_end = args.t_end.ok_or_else(|| {
            usage(format!("--t-end is required for {:?}", args.command).to_lowercase())
        })?;
        Some(TimeGrid::new(args.t_start, t_end, args.samples).map_err(|e| from_lib("t-end", e))?)
    };

    if !args.tolerance.is_finite() || args.tolerance < 0.0 {
        return Err(usage("--tolerance must be a finite non-negative number"));
    }

    Ok(RunConfig {
        command: args.command,
        hamiltonian,
        grid,
        state_source,
        output: args.out,
        tolerance: args.tolerance,
    })
}

#[derive(Debug)]
enum RunError {
    Io(String),
    Usage(String),
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => RunError::Io(io.to_string()),
            other => RunError::Usage(other.to_string()),
        }
    }
}

fn load_state(path: &PathBuf) -> Result<TwoQubitState, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    TwoQubitState::parse_text(&text)
        .map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))
}

fn open_output(config: &RunConfig) -> Result<Box<dyn Write>, RunError> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_trajectory(config: &RunConfig, traj: &Trajectory) -> Result<(), RunError> {
    let mut out = open_output(config)?;
    traj.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes a summary line to stdout, or to stderr when stdout carries the CSV.
fn summary(config: &RunConfig, line: &str) {
    if config.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn execute(config: &RunConfig) -> Result<i32, RunError> {
    let hp = &config.hamiltonian;
    match config.command {
        Command::Evolve => {
            let grid = config.grid.expect("grid is set for evolve");
            let (psi0, ansatz) = match &config.state_source {
                StateSource::Schmidt(ap) => (ap.initial_state(), Some(*ap)),
                StateSource::File(path) => (load_state(path)?, None),
                StateSource::Counterexample(a) => (counterexample_initial(*a)?, None),
            };
            let traj = simulate_trajectory(hp, &psi0, &grid, ansatz.as_ref())?;
            write_trajectory(config, &traj)?;
            Ok(EXIT_OK)
        }
        Command::Counterexample => {
            let grid = config.grid.expect("grid is set for counterexample");
            let StateSource::Counterexample(a) = config.state_source else {
                unreachable!("parse_args enforces --a for counterexample")
            };
            let traj = simulate_trajectory(hp, &counterexample_initial(a)?, &grid, None)?;
            write_trajectory(config, &traj)?;
            let cos_gap = traj
                .max_cos_alpha_discrepancy()
                .expect("closed form attached for isotropic parameters");
            let beta_gap = traj.max_beta_discrepancy().unwrap_or(0.0);
            summary(config, &format!("max|beta-closed| = {beta_gap:.3e}"));
            let ok = cos_gap < CLOSED_FORM_THRESHOLD;
            let rel = if ok { "<" } else { ">=" };
            summary(
                config,
                &format!("max|cos(alpha)-closed| = {cos_gap:.3e} {rel} {CLOSED_FORM_THRESHOLD:e}"),
            );
            Ok(if ok { EXIT_OK } else { EXIT_FAILS })
        }
        Command::Falsify => {
            let grid = config.grid.expect("grid is set for falsify");
            let StateSource::Schmidt(ap) = &config.state_source else {
                unreachable!("parse_args enforces an inline state for falsify")
            };
            let report = falsify(ap, hp, &grid, config.tolerance)?;
            print!("{}", report.render_text());
            match &config.output {
                Some(_) => {
                    let mut out = open_output(config)?;
                    report.write_csv(&mut out)?;
                    out.flush()?;
                }
                None => {
                    println!("{}", crate::falsifier::FalsificationReport::CSV_HEADER);
                    println!("{}", report.csv_row());
                }
            }
            Ok(match report.verdict {
                Verdict::Holds => EXIT_OK,
                Verdict::Fails => EXIT_FAILS,
            })
        }
        Command::Schmidt => {
            let StateSource::File(path) = &config.state_source else {
                unreachable!("parse_args enforces --state-file for schmidt")
            };
            let psi = load_state(path)?;
            let f = schmidt_decompose(&psi)?;
            let mut text = String::new();
            use std::fmt::Write as _;
            writeln!(text, "alpha {:.10}", f.alpha).unwrap();
            writeln!(text, "beta {:.10}", f.beta).unwrap();
            writeln!(text, "n_theta {:.10}", f.n.theta()).unwrap();
            writeln!(text, "n_phi {:.10}", f.n.phi()).unwrap();
            writeln!(text, "m_theta {:.10}", f.m.theta()).unwrap();
            writeln!(text, "m_phi {:.10}", f.m.phi()).unwrap();
            if let Ok(fb) = schmidt_fixed_basis(&psi) {
                writeln!(text, "fixed_basis_alpha {:.10}", fb.alpha).unwrap();
                writeln!(text, "fixed_basis_beta {:.10}", fb.beta).unwrap();
            }
            writeln!(text, "entropy {:.10}", entanglement_entropy(&psi)).unwrap();
            let mut out = open_output(config)?;
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs a parsed configuration and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(code) => code,
        Err(RunError::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Parses and runs; the binary's whole body.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config),
        Err(CliError::Info(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprint!("{e}");
            if !e.to_string().ends_with('\n') {
                eprintln!();
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("spinpair".to_string())
            .chain(s.split_whitespace().map(String::from))
            .collect()
    }

    #[test]
    fn counterexample_config() {
        let cfg = parse_args(argv(
            "counterexample --a 0.7853981633974483 --lambda 1 --t-end 3.141592653589793",
        ))
        .unwrap();
        assert_eq!(cfg.command, Command::Counterexample);
        assert_eq!(cfg.state_source, StateSource::Counterexample(FRAC_PI_4));
        assert_eq!(cfg.hamiltonian, HamiltonianParams::heisenberg(1.0));
        let g = cfg.grid.unwrap();
        assert_eq!((g.t_start(), g.t_end(), g.samples()), (0.0, PI, 201));
        assert_eq!(cfg.tolerance, 1e-9);
        assert!(cfg.output.is_none());
    }

    #[test]
    fn falsify_config() {
        let cfg = parse_args(argv(
            "falsify --alpha 0 --beta 0 --n-theta 0 --n-phi 0 --m-theta 3.141592653589793 --m-phi 0 --lambda 1 --t-end 3.141592653589793",
        ))
        .unwrap();
        let StateSource::Schmidt(ap) = cfg.state_source else {
            panic!()
        };
        assert_eq!(ap.alpha(), 0.0);
        assert_eq!(ap.m0().theta(), PI);
    }

    #[test]
    fn usage_errors() {
        let code = |s: &str| parse_args(argv(s)).unwrap_err().exit_code();
        assert_eq!(code("evolve --t-end 1"), EXIT_USAGE);
        assert_eq!(code("evolve --a 0.3"), EXIT_USAGE);
        assert_eq!(code("evolve --t-end 1 --a 0.3 --alpha 0.1"), EXIT_USAGE);
        assert_eq!(code("evolve --t-end 1 --a 0.3 --bogus 1"), EXIT_USAGE);
        assert_eq!(code("evolve --t-end x --a 0.3"), EXIT_USAGE);
        assert_eq!(code("frobnicate --t-end 1"), EXIT_USAGE);
        assert_eq!(
            code("counterexample --a 0.3 --t-end 1 --omega1 0.5"),
            EXIT_USAGE
        );
        assert_eq!(code("counterexample --a 4 --t-end 1"), EXIT_USAGE);
        assert_eq!(code("falsify --a 0.3 --t-end 1"), EXIT_USAGE);
        assert_eq!(code("schmidt"), EXIT_USAGE);
        assert_eq!(
            code("falsify --alpha 0.2 --n-theta 5 --t-end 1"),
            EXIT_USAGE
        );
        assert_eq!(code("--help"), EXIT_OK);

        let msg = parse_args(argv("evolve --t-end 1 --a 0.3 --bogus 1"))
            .unwrap_err()
            .to_string();
        assert!(msg.contains("--bogus"), "{msg}");
        let msg = parse_args(argv("evolve --t-end nope --a 0.3"))
            .unwrap_err()
            .to_string();
        assert!(msg.contains("--t-end"), "{msg}");
    }

    #[test]
    fn negative_values_parse() {
        let cfg = parse_args(argv("evolve --a 0.3 --omega1 -1.5 --t-start -2 --t-end 1")).unwrap();
        assert_eq!(cfg.hamiltonian.omega1, -1.5);
        assert_eq!(cfg.grid.unwrap().t_start(), -2.0);
    }
}
