use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use resonance_core::sweep::{figure_preset, run_to_file, RunSpec, FIGURES};
use resonance_core::units::{laboratory_estimate, PhysicalScenario};
use resonance_core::{
    evaluate, normalized_value, physical_value, AtomState, BoundaryModel, Error, GeometryConfig,
    KernelKind, Observable, Orientation, Quantity,
};
use resonance_oracle::{
    brute_force_checkpoints, cached_brute_force, equivalence_suite, kernel_oracle, OracleCache,
    OracleError, DEFAULT_BUDGET, SUITE_CHECKPOINT, SUITE_DIGITS, SUITE_N_MAX,
};

#[derive(Parser)]
#[command(name = "resonance", version, about = "Resonance shift and relaxation rate of two accelerated atoms between mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resonance energy shift at one point (reduced units)
    Shift(PointArgs),
    /// Relaxation rate at one point (reduced units)
    Rate(PointArgs),
    /// Run a key = value sweep spec and write CSV
    Sweep {
        spec: PathBuf,
        /// Output CSV (overrides `out` in the spec)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the CSVs for one figure preset, or `all`
    Figure {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Laboratory-unit estimate of the acceleration correction
    Estimate(EstimateArgs),
    /// Extended-precision reference evaluations
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Perp,
    Par,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Perp => Orientation::Perpendicular,
            OrientationArg::Par => Orientation::Parallel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    TwoMirror,
    SingleMirror,
    FreeSpace,
    LowAcc,
}

impl From<ModelArg> for BoundaryModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::TwoMirror => BoundaryModel::TwoMirror,
            ModelArg::SingleMirror => BoundaryModel::SingleMirror,
            ModelArg::FreeSpace => BoundaryModel::FreeSpace,
            ModelArg::LowAcc => BoundaryModel::LowAcceleration,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Cos,
    Sin,
}

impl From<KindArg> for KernelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Cos => KernelKind::Cosine,
            KindArg::Sin => KernelKind::Sine,
        }
    }
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, value_enum, default_value = "perp")]
    orientation: OrientationArg,
    /// ω₀·d
    #[arg(long)]
    d: f64,
    /// ω₀·z0 (omit for free space)
    #[arg(long)]
    z0: Option<f64>,
    /// ω₀·L (omit for a single mirror)
    #[arg(long = "L")]
    l: Option<f64>,
    /// a/ω₀
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 3.0 * PI / 4.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "two-mirror")]
    model: ModelArg,
}

#[derive(Args)]
struct EstimateArgs {
    /// Transition energy in eV
    #[arg(long, default_value_t = 5.0)]
    omega0: f64,
    /// Plate separation in nm
    #[arg(long = "L-nm", default_value_t = 50.0)]
    l_nm: f64,
    #[arg(long = "d-nm", default_value_t = 20.0)]
    d_nm: f64,
    #[arg(long = "z0-nm", default_value_t = 12.0)]
    z0_nm: f64,
    /// Proper acceleration in m/s²
    #[arg(long = "a-si", default_value_t = 1e17)]
    a_si: f64,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[arg(long, default_value_t = 3.0 * PI / 4.0)]
    theta: f64,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Kernel value at one point
    Kernel {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Brute-force image sum over |n| ≤ n_max
    Sum {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "perp")]
        orientation: OrientationArg,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        z0: f64,
        #[arg(long = "L")]
        l: f64,
        #[arg(long)]
        a: f64,
        #[arg(long = "n-max", default_value_t = 1_000_000)]
        n_max: u64,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Fill the cache with the equivalence-suite reference sums
    Suite {
        #[arg(long, default_value = "oracle-cache")]
        cache: PathBuf,
    },
}

enum Failure {
    Validation(String),
    Convergence(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_convergence() {
            Failure::Convergence(e.to_string())
        } else if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Core(inner) => inner.into(),
            OracleError::Io(_) | OracleError::Record(_) => Failure::Other(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn point(quantity: Quantity, p: &PointArgs) -> Result<(), Failure> {
    let obs = Observable::new(quantity, p.model.into())?;
    let geometry = GeometryConfig::new(
        p.orientation.into(),
        p.d,
        p.z0.unwrap_or(f64::INFINITY),
        p.l.unwrap_or(f64::INFINITY),
        p.a,
    );
    let state = AtomState::new(p.theta, p.lambda)?;
    let v = evaluate(obs, &geometry, p.tol)?;
    println!(
        "quantity={quantity} model={} orientation={} d={} z0={} L={} a={} theta={} lambda={} \
         reduced_value={:e} normalized_value={:e} physical_value={:e} tail_bound={:e} converged={} regime_warning={}",
        obs.model(),
        geometry.orientation,
        geometry.d_r,
        geometry.z0_r,
        geometry.l_r,
        geometry.a_r,
        p.theta,
        p.lambda,
        v.reduced_value,
        normalized_value(&v, &state),
        physical_value(&v, &state, 1.0),
        v.tail_bound,
        v.tail_bound <= p.tol,
        v.regime_warning,
    );
    Ok(())
}

fn estimate(e: &EstimateArgs) -> Result<(), Failure> {
    let s = PhysicalScenario {
        orientation: Orientation::Perpendicular,
        omega0_ev: e.omega0,
        l_nm: e.l_nm,
        d_nm: e.d_nm,
        z0_nm: e.z0_nm,
        a_si: e.a_si,
        lambda_c: e.lambda,
        theta: e.theta,
    };
    let report = laboratory_estimate(&s)?;
    print!("{}", report.render());
    if !report.regime_ok {
        eprintln!("warning: a*L >= 0.1, the low-acceleration expansion is outside its regime");
    }
    Ok(())
}

fn oracle(cmd: &OracleCommand) -> Result<(), Failure> {
    match cmd {
        OracleCommand::Kernel { kind, z, a, digits } => {
            print!("{}", kernel_oracle((*kind).into(), *z, *a, *digits)?.to_record());
        }
        OracleCommand::Sum {
            kind,
            orientation,
            d,
            z0,
            l,
            a,
            n_max,
            digits,
            budget,
        } => {
            let cfg = GeometryConfig::cavity((*orientation).into(), *d, *z0, *l, *a)
                .validate()
                .map_err(Error::from)?;
            let r = brute_force_checkpoints((*kind).into(), &cfg, &[*n_max], *digits, *budget)?;
            print!("{}", r[0].to_record());
        }
        OracleCommand::Suite { cache } => {
            let cache = OracleCache::open(cache)?;
            for (i, entry) in equivalence_suite().iter().enumerate() {
                let t = std::time::Instant::now();
                let r = cached_brute_force(&cache, entry, &[SUITE_CHECKPOINT, SUITE_N_MAX], SUITE_DIGITS)?;
                let c = entry.config;
                println!(
                    "[{:2}] {} {} d={} z0={} L={} a={} value={:.16e} ({:.1?})",
                    i + 1,
                    entry.kind,
                    c.orientation,
                    c.d_r,
                    c.z0_r,
                    c.l_r,
                    c.a_r,
                    r[1].value_f64(),
                    t.elapsed()
                );
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Shift(p) => point(Quantity::Shift, &p),
        Command::Rate(p) => point(Quantity::Rate, &p),
        Command::Sweep { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Failure::Validation(format!("{}: {e}", spec.display())))?;
            let spec = RunSpec::parse(&text)?;
            let path = run_to_file(&spec, out.as_deref())?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Figure { name, out } => {
            let names: Vec<&str> = if name == "all" { FIGURES.to_vec() } else { vec![name.as_str()] };
            std::fs::create_dir_all(&out).map_err(|e| Failure::Other(e.to_string()))?;
            for n in names {
                for spec in figure_preset(n, &out)? {
                    let path = run_to_file(&spec, None)?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Estimate(e) => estimate(&e),
        Command::Oracle { command } => oracle(&command),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Convergence(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
