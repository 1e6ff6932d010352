use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gatom_cli::csvfmt::{
    fmt_f, write_diagram_csv, write_emission_csv, write_poles_csv, write_spectrum_csv,
    write_trajectory_csv,
};
use gatom_cli::sweep::{
    linspace, run_diagram_sweep, run_spectrum_sweep, DiagramMethod, DiagramSpec,
};
use gatom_core::*;

#[derive(Parser)]
#[command(
    name = "gatom",
    about = "Giant-atom waveguide toolkit: retarded emission, chirality, scattering",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate spontaneous emission and write the directional report CSV
    Emit(EmitArgs),
    /// Chirality diagram over (dzeta, dtheta) in [0, 2pi]^2
    Diagram(DiagramArgs),
    /// Scattering spectrum over a drive-frequency range
    Spectrum(SpectrumArgs),
    /// Characteristic-equation poles with residue weights
    Poles(PolesArgs),
    /// Design calculations
    #[command(subcommand)]
    Design(DesignCommand),
    /// Run the built-in invariant suite
    Check,
}

#[derive(Args)]
struct EmitArgs {
    /// Configuration file (key = value format)
    #[arg(long)]
    config: PathBuf,
    /// Final time
    #[arg(long)]
    tmax: f64,
    /// Time step (default: smallest delay / 50, capped by the decay rate)
    #[arg(long)]
    dt: Option<f64>,
    /// Output CSV: t,IL,IR,C,population,balance
    #[arg(long)]
    out: PathBuf,
    /// Also write the raw trajectory CSV: t,re_beta,im_beta,population
    #[arg(long)]
    trajectory_out: Option<PathBuf>,
    /// Debug flag: coarse space-time field movie CSV: x,t,re_phi,im_phi
    #[arg(long)]
    field_out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    /// Number of coupling legs
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Non-Markovian parameter gamma * tau
    #[arg(long, default_value_t = 0.01)]
    gamma_tau: f64,
    /// Final time in units of the neighbour delay tau
    #[arg(long = "tf", default_value_t = 100.0 * std::f64::consts::PI)]
    t_f_over_tau: f64,
    /// Grid size as ROWSxCOLS, e.g. 101x101
    #[arg(long, default_value = "101x101")]
    grid: String,
    /// closed_form or dde
    #[arg(long, default_value = "closed_form")]
    method: String,
    /// Output CSV: dzeta,dtheta,C,population (row-major)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    omega_min: f64,
    #[arg(long)]
    omega_max: f64,
    /// Number of frequency samples (0 gives an empty table)
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Output CSV: omega_d,delta,R_left,T_LR,R_right,T_RL,NR
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PolesArgs {
    #[arg(long)]
    config: PathBuf,
    /// Extend the search this many chain periods from the atomic line
    /// (0 uses the default dominant region)
    #[arg(long, default_value_t = 0.0)]
    periods: f64,
    /// Newton residual tolerance relative to omega
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output CSV: re_s,im_s,re_w,im_w plus a captured-weight comment
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum DesignCommand {
    /// Dark-point design and the fully chiral emission frequencies
    Dark(DarkArgs),
}

#[derive(Args)]
struct DarkArgs {
    #[arg(long)]
    kplus: i64,
    #[arg(long)]
    kminus: i64,
    #[arg(long)]
    n: u32,
    /// Leg spacing d (with v = 1)
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// List fully chiral frequencies up to this value (default: 1.5 omega_c)
    #[arg(long)]
    omega_max: Option<f64>,
    /// Optional CSV output of the two frequency lists
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Job-level failure (exit 1), as opposed to usage errors (exit 2).
#[derive(Debug)]
struct JobError(String);

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl<E: std::error::Error> From<E> for JobError {
    fn from(e: E) -> Self {
        JobError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Emit(args) => emit(args),
        Command::Diagram(args) => diagram(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Poles(args) => poles(args),
        Command::Design(DesignCommand::Dark(args)) => design_dark(args),
        Command::Check => {
            return if gatom_cli::checks::run_all() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Exit::Job(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

enum Exit {
    Usage(String),
    Job(String),
}

impl From<JobError> for Exit {
    fn from(e: JobError) -> Self {
        Exit::Job(e.0)
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit::Job(e.to_string())
    }
}

fn load_config(path: &PathBuf) -> Result<GiantAtomConfig, Exit> {
    GiantAtomConfig::from_file(path).map_err(|e| match e {
        ConfigError::Parse { .. } | ConfigError::MissingKey(_) => Exit::Usage(e.to_string()),
        other => Exit::Job(other.to_string()),
    })
}

fn writer(path: &PathBuf) -> Result<BufWriter<File>, Exit> {
    Ok(BufWriter::new(File::create(path)?))
}

fn emit(args: EmitArgs) -> Result<(), Exit> {
    let config = load_config(&args.config)?;
    let kernel = config.delay_kernel();
    let dt = args.dt.unwrap_or_else(|| default_dt(&kernel, config.gamma_e));
    let traj = integrate_emission(&config, &kernel, dt, args.tmax).map_err(JobError::from)?;
    let report = accumulate_directional(&traj, &config);
    write_emission_csv(&mut writer(&args.out)?, &report)?;

    if let Some(path) = &args.trajectory_out {
        write_trajectory_csv(&mut writer(path)?, &traj)?;
    }
    if let Some(path) = &args.field_out {
        write_field_csv(&mut writer(path)?, &traj, &config)?;
    }
    Ok(())
}

/// Coarse space-time field movie for debugging: 129 positions spanning one
/// emission horizon around the legs, 256 time frames.
fn write_field_csv(
    out: &mut impl Write,
    traj: &Trajectory,
    config: &GiantAtomConfig,
) -> Result<(), Exit> {
    let horizon = traj.t_max().min(4.0 * (config.span() + traj.t_max() / 8.0));
    let x_lo = config.x_first() - horizon;
    let x_hi = config.x_last() + horizon;
    writeln!(out, "x,t,re_phi,im_phi")?;
    for ti in 0..=256 {
        let t = traj.t_max() * ti as f64 / 256.0;
        for xi in 0..=128 {
            let x = x_lo + (x_hi - x_lo) * xi as f64 / 128.0;
            let phi = field_at(traj, config, x, t).map_err(JobError::from)?;
            writeln!(out, "{},{},{},{}", fmt_f(x), fmt_f(t), fmt_f(phi.re), fmt_f(phi.im))?;
        }
    }
    Ok(())
}

fn diagram(args: DiagramArgs) -> Result<(), Exit> {
    let (rows, cols) = args
        .grid
        .split_once('x')
        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
        .ok_or_else(|| Exit::Usage(format!("cannot parse grid `{}` as ROWSxCOLS", args.grid)))?;
    let method = match args.method.as_str() {
        "closed_form" => DiagramMethod::ClosedForm,
        "dde" => DiagramMethod::Dde,
        other => return Err(Exit::Usage(format!("unknown method `{other}`"))),
    };
    let spec = DiagramSpec {
        n: args.n,
        gamma_tau: args.gamma_tau,
        t_f_over_tau: args.t_f_over_tau,
        axis1_points: rows,
        axis2_points: cols,
        method,
    };
    let grid = run_diagram_sweep(&spec).map_err(JobError::from)?;
    write_diagram_csv(&mut writer(&args.out)?, &spec, &grid)?;
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> Result<(), Exit> {
    let config = load_config(&args.config)?;
    if args.points > 0 && !(args.omega_min > 0.0 && args.omega_max >= args.omega_min) {
        return Err(Exit::Usage(format!(
            "need 0 < omega_min <= omega_max, got [{}, {}]",
            args.omega_min, args.omega_max
        )));
    }
    let omegas = match args.points {
        0 => Vec::new(),
        1 => vec![args.omega_min],
        n => linspace(args.omega_min, args.omega_max, n),
    };
    let rows = run_spectrum_sweep(&config, &omegas).map_err(JobError::from)?;
    write_spectrum_csv(&mut writer(&args.out)?, &rows)?;
    Ok(())
}

fn poles(args: PolesArgs) -> Result<(), Exit> {
    let config = load_config(&args.config)?;
    let kernel = config.delay_kernel();
    let region = if args.periods > 0.0 {
        SearchRegion::with_chain_periods(&kernel, config.omega, config.gamma_e, args.periods)
    } else {
        SearchRegion::default_for(&kernel, config.omega, config.gamma_e)
    };
    let expansion =
        find_poles(&config, &kernel, &region, args.tol).map_err(JobError::from)?;
    write_poles_csv(&mut writer(&args.out)?, &expansion)?;
    Ok(())
}

fn design_dark(args: DarkArgs) -> Result<(), Exit> {
    let design = dark_state_design(args.kplus, args.kminus, args.n, args.d)
        .map_err(JobError::from)?;
    let omega_max = args.omega_max.unwrap_or(1.5 * design.omega_c);
    let (left, right) =
        full_chirality_frequencies(args.kplus, args.kminus, args.n, args.d, omega_max)
            .map_err(JobError::from)?;

    println!("dark point design: k+ = {}, k- = {}, N = {}, d = {}", args.kplus, args.kminus, args.n, args.d);
    println!("  lambda  = {}", fmt_f(design.lambda));
    println!("  omega_c = {}  ({} in units of 2 pi / d)", fmt_f(design.omega_c), fmt_f(design.omega_c * args.d / (2.0 * std::f64::consts::PI)));
    let show = |label: &str, list: &[f64]| {
        println!("  {label} (up to omega = {}):", fmt_f(omega_max));
        if list.is_empty() {
            println!("    (none)");
        }
        for w in list {
            println!("    omega = {:<22}  omega/omega_c = {}", fmt_f(*w), fmt_f(w / design.omega_c));
        }
    };
    show("complete left emission, C = +1", &left);
    show("complete right emission, C = -1", &right);

    if let Some(path) = &args.out {
        let mut out = writer(path)?;
        writeln!(out, "omega,omega_over_omega_c,chirality_sign")?;
        for w in &left {
            writeln!(out, "{},{},1", fmt_f(*w), fmt_f(w / design.omega_c))?;
        }
        for w in &right {
            writeln!(out, "{},{},-1", fmt_f(*w), fmt_f(w / design.omega_c))?;
        }
    }
    Ok(())
}
