//! CLI for the uncertainty-bound pipeline: single-point reports, parameter
//! sweeps and the invariant-verification suites.
//!
//! Exit codes: 0 success, 1 invalid arguments or parameters, 2 internal
//! consistency failure (or failed verification).

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use horizon_eur::{
    eigenbasis, full_report, run_all, spin_observables, state_bell_like, state_w_traced,
    BoundReport, DensityMatrix, Error as CoreError, HorizonParams, ProjectiveBasis, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "horizon-eur",
    version,
    about = "Entropic uncertainty bounds with quantum memory near a Schwarzschild horizon"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all bound quantities at one parameter point (JSON on stdout)
    Compute(ComputeArgs),
    /// Sweep an (omega, r0) grid, one row per point (CSV or JSON on stdout)
    Sweep(SweepArgs),
    /// Run the seeded invariant suites and report per-suite pass counts
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum StateLabel {
    /// (|0,0> + |up,down>)/sqrt(2)
    Bell,
    /// Three-party W state with the third party traced out
    W,
}

impl StateLabel {
    fn as_str(self) -> &'static str {
        match self {
            StateLabel::Bell => "bell",
            StateLabel::W => "w",
        }
    }

    fn density(self) -> DensityMatrix {
        match self {
            StateLabel::Bell => state_bell_like().to_density(),
            StateLabel::W => state_w_traced(),
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Example state to analyze
    #[arg(long, value_enum)]
    state: StateLabel,
    /// Omega = omega/T_H (dimensionless); use with --r0
    #[arg(long)]
    omega: Option<f64>,
    /// R0 = r0/2M (dimensionless, >= 1); use with --omega
    #[arg(long)]
    r0: Option<f64>,
    /// Black-hole mass in geometric units (with --frequency and --radius)
    #[arg(long)]
    mass: Option<f64>,
    /// Mode frequency in geometric units
    #[arg(long)]
    frequency: Option<f64>,
    /// Static observer radius in geometric units
    #[arg(long)]
    radius: Option<f64>,
    /// Measurement pair from {x, y, z}, e.g. x,y
    #[arg(long, default_value = "x,y")]
    bases: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Example state to analyze
    #[arg(long, value_enum)]
    state: StateLabel,
    /// Comma-separated Omega values
    #[arg(long, value_delimiter = ',', default_value = "10,30")]
    omegas: Vec<f64>,
    /// Smallest R0 on the grid
    #[arg(long, default_value_t = 1.001)]
    r0_min: f64,
    /// Largest R0 on the grid
    #[arg(long, default_value_t = 1.05)]
    r0_max: f64,
    /// Number of R0 grid points per Omega
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Measurement pair from {x, y, z}, e.g. x,y
    #[arg(long, default_value = "x,y")]
    bases: String,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// RNG seed; identical seeds give byte-identical output
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random cases per randomized suite
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Tolerance applied to the invariant checks
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Insert a known-invalid state to exercise the failure path
    #[arg(long)]
    inject_fault: bool,
}

/// JSON shape shared by `compute` and `sweep --format json`.
#[derive(Serialize)]
struct ReportRow {
    state_label: String,
    params: HorizonParams,
    q_d: f64,
    lhs: f64,
    u1: f64,
    u2: f64,
    delta1: f64,
    delta2: f64,
    mu_bound: f64,
    berta_no_memory: f64,
    h_a: f64,
    mutual_info: f64,
    holevo_m1: f64,
    holevo_m2: f64,
    h_m1: f64,
    h_m2: f64,
    c1: f64,
}

impl From<&BoundReport> for ReportRow {
    fn from(r: &BoundReport) -> Self {
        ReportRow {
            state_label: r.state_label.clone(),
            params: r.params,
            q_d: r.params.dilation_angle(),
            lhs: r.lhs,
            u1: r.u1,
            u2: r.u2,
            delta1: r.delta1,
            delta2: r.delta2,
            mu_bound: r.mu_bound,
            berta_no_memory: r.berta_no_memory,
            h_a: r.h_a,
            mutual_info: r.mutual_info,
            holevo_m1: r.holevo_m1,
            holevo_m2: r.holevo_m2,
            h_m1: r.h_m1,
            h_m2: r.h_m2,
            c1: r.c1,
        }
    }
}

const CSV_HEADER: &str =
    "state,omega,r0,q_d,lhs,u1,u2,delta1,delta2,h_a,mutual_info,holevo_m1,holevo_m2,h_m1,h_m2,c1";

/// 12 significant digits, stable across runs.
fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

fn csv_row(r: &BoundReport) -> String {
    let values = [
        r.params.omega_ratio(),
        r.params.r_ratio(),
        r.params.dilation_angle(),
        r.lhs,
        r.u1,
        r.u2,
        r.delta1,
        r.delta2,
        r.h_a,
        r.mutual_info,
        r.holevo_m1,
        r.holevo_m2,
        r.h_m1,
        r.h_m2,
        r.c1,
    ];
    let mut row = r.state_label.clone();
    for v in values {
        row.push(',');
        row.push_str(&fmt12(v));
    }
    row
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InternalConsistency(_) => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn basis_pair(spec: &str) -> Result<(ProjectiveBasis, ProjectiveBasis), CliError> {
    let (sx, sy, sz) = spin_observables();
    let pick = |label: &str| -> Result<ProjectiveBasis, CliError> {
        let obs = match label {
            "x" => &sx,
            "y" => &sy,
            "z" => &sz,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown observable '{other}': expected x, y or z"
                )))
            }
        };
        eigenbasis(obs).map_err(CliError::from)
    };
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--bases expects two comma-separated labels, got '{spec}'"
        )));
    }
    Ok((pick(parts[0])?, pick(parts[1])?))
}

fn resolve_params(args: &ComputeArgs) -> Result<HorizonParams, CliError> {
    let physical = [args.mass, args.frequency, args.radius];
    let n_physical = physical.iter().flatten().count();
    match (args.omega, args.r0, n_physical) {
        (Some(omega), Some(r0), 0) => HorizonParams::new(omega, r0).map_err(CliError::from),
        (None, None, 3) => HorizonParams::from_physical(
            args.mass.unwrap(),
            args.frequency.unwrap(),
            args.radius.unwrap(),
        )
        .map_err(CliError::from),
        _ => Err(CliError::Usage(
            "provide either --omega and --r0, or all of --mass, --frequency, --radius".into(),
        )),
    }
}

fn warn_rindler(params: &HorizonParams) {
    if !params.within_rindler_domain() {
        eprintln!(
            "warning: R0 = {} > 1.05 is outside the near-horizon approximation domain",
            params.r_ratio()
        );
    }
}

fn cmd_compute(args: &ComputeArgs) -> Result<(), CliError> {
    let params = resolve_params(args)?;
    warn_rindler(&params);
    let (b1, b2) = basis_pair(&args.bases)?;
    let rho = args.state.density();
    let report = full_report(args.state.as_str(), &rho, &b1, &b2, &params)?;
    let row = ReportRow::from(&report);
    let json = serde_json::to_string_pretty(&row)
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
    println!("{json}");
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.omegas.is_empty() {
        return Err(CliError::Usage("--omegas must not be empty".into()));
    }
    if let Some(bad) = args.omegas.iter().find(|o| !o.is_finite() || **o <= 0.0) {
        return Err(CliError::Usage(format!("Omega must be > 0, got {bad}")));
    }
    if args.steps < 1 {
        return Err(CliError::Usage("--steps must be >= 1".into()));
    }
    if args.r0_min < 1.0 {
        return Err(CliError::Usage(format!(
            "R0 must be >= 1, got {}",
            args.r0_min
        )));
    }
    if args.r0_min > args.r0_max {
        return Err(CliError::Usage(format!(
            "--r0-min {} exceeds --r0-max {}",
            args.r0_min, args.r0_max
        )));
    }
    let (b1, b2) = basis_pair(&args.bases)?;
    let rho = args.state.density();

    let mut omegas = args.omegas.clone();
    omegas.sort_by(|a, b| a.partial_cmp(b).expect("finite by validation"));

    if args.r0_max > horizon_eur::RINDLER_R0_MAX + 1e-12 {
        eprintln!(
            "warning: R0 up to {} exceeds 1.05, outside the near-horizon approximation domain",
            args.r0_max
        );
    }

    let mut reports = Vec::with_capacity(omegas.len() * args.steps);
    for &omega in &omegas {
        for k in 0..args.steps {
            let r0 = if args.steps == 1 {
                args.r0_min
            } else {
                args.r0_min + (args.r0_max - args.r0_min) * k as f64 / (args.steps - 1) as f64
            };
            let params = HorizonParams::new(omega, r0)?;
            reports.push(full_report(args.state.as_str(), &rho, &b1, &b2, &params)?);
        }
    }

    match args.format {
        Format::Csv => {
            println!("{CSV_HEADER}");
            for r in &reports {
                println!("{}", csv_row(r));
            }
        }
        Format::Json => {
            let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();
            let json = serde_json::to_string_pretty(&rows)
                .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
            println!("{json}");
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.trials < 1 {
        return Err(CliError::Usage("--trials must be >= 1".into()));
    }
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    let cfg = VerifyConfig {
        seed: args.seed,
        trials: args.trials,
        tolerance: args.tolerance,
        inject_fault: args.inject_fault,
    };
    let suites = run_all(&cfg);
    let mut failed = 0usize;
    for suite in &suites {
        if suite.passed() {
            println!("{}: pass ({} cases)", suite.name, suite.cases);
        } else {
            failed += 1;
            println!(
                "{}: FAIL ({}/{} cases)",
                suite.name,
                suite.failures.len(),
                suite.cases
            );
            for f in suite.failures.iter().take(3) {
                println!("  counterexample: {f}");
            }
            if suite.failures.len() > 3 {
                println!("  ... and {} more", suite.failures.len() - 3);
            }
        }
        for note in &suite.notes {
            println!("  note: {note}");
        }
    }
    if failed == 0 {
        println!(
            "all suites passed (seed {}, trials {}, tolerance {:e})",
            args.seed, args.trials, args.tolerance
        );
        Ok(())
    } else {
        println!(
            "verification failed: {failed} suite(s) failed (seed {}, trials {}, tolerance {:e})",
            args.seed, args.trials, args.tolerance
        );
        Err(CliError::Internal(format!("{failed} suite(s) failed")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
