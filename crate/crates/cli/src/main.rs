//! `dicke2p` — command-line front end for the two-photon Dicke mean-field
//! laboratory.
//!
//! All frequencies and rates are interpreted in units of the boson frequency
//! ω_c; parameters are rescaled so that ω_c = 1 before any computation, which
//! leaves the physics unchanged. Exit codes: 0 success, 1 domain error
//! (unphysical request, non-convergence), 2 usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicke2p::model::ValidationScope;
use dicke2p::textio::format_float;
use dicke2p::{
    classify, grid_sweep, integrate, photon_curve, render_svg, run_suite, run_suite_for,
    suite_params, superradiant_branches, threshold_scan, write_csv, AxisSpec, Branches,
    CrossingType, Error, HilbertSpec, MeanFieldState, ModelParams, Outcome, ParamAxis,
    ScanPredicate, SweepConfig,
};

/// Mean-field phases, trajectories and thresholds of the driven-dissipative
/// two-photon Dicke model, with an exact small-scale Lindblad oracle.
///
/// Units: every frequency and rate (omega-0, g, kappa, gamma-down, gamma-phi)
/// is in units of the boson frequency omega-c. omega-c defaults to 1; passing
/// a different value only relabels the time axis, since all inputs are
/// rescaled to omega-c = 1 internally.
#[derive(Parser)]
#[command(name = "dicke2p", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the six mean-field moments from an initial condition.
    #[command(allow_negative_numbers = true)]
    Trajectory(TrajectoryArgs),
    /// Print the normal branch and the superradiant branch pair.
    #[command(allow_negative_numbers = true)]
    Steady(SteadyArgs),
    /// Print the phase label (N, S, B or I) at one parameter point.
    #[command(allow_negative_numbers = true)]
    Classify(ClassifyArgs),
    /// Tabulate the steady photon number against the coupling g (CSV).
    #[command(allow_negative_numbers = true)]
    PhotonCurve(PhotonCurveArgs),
    /// Classify every cell of a two-axis parameter grid (CSV, optional SVG).
    #[command(allow_negative_numbers = true)]
    PhaseDiagram(PhaseDiagramArgs),
    /// Bisect one parameter for the value where a predicate flips.
    #[command(allow_negative_numbers = true)]
    Threshold(ThresholdArgs),
    /// Run the exact-Lindblad validation suite and print its report.
    Oracle(OracleArgs),
}

/// Model parameters shared by every mean-field subcommand. Flags mirror the
/// config-file keys one to one; flags override file values.
#[derive(Args)]
struct ParamArgs {
    /// Config file with `key = value` lines; keys are the seven parameter
    /// names below (omega_c, omega_0, g, n_qubits, kappa, gamma_down,
    /// gamma_phi). `#` starts a comment.
    #[arg(long, value_name = "PATH", help_heading = "Model parameters")]
    config: Option<PathBuf>,
    /// Boson frequency ω_c; the unit of every other rate (default 1).
    #[arg(long, value_name = "FREQ", help_heading = "Model parameters")]
    omega_c: Option<f64>,
    /// Qubit frequency ω_0, in units of ω_c.
    #[arg(long, value_name = "FREQ", help_heading = "Model parameters")]
    omega_0: Option<f64>,
    /// Two-photon coupling g, in units of ω_c.
    #[arg(long, value_name = "FREQ", help_heading = "Model parameters")]
    g: Option<f64>,
    /// Number of qubits N.
    #[arg(long, value_name = "N", help_heading = "Model parameters")]
    n_qubits: Option<usize>,
    /// Photon loss rate κ, in units of ω_c.
    #[arg(long, value_name = "RATE", help_heading = "Model parameters")]
    kappa: Option<f64>,
    /// Qubit decay rate Γ↓, in units of ω_c.
    #[arg(long, value_name = "RATE", help_heading = "Model parameters")]
    gamma_down: Option<f64>,
    /// Qubit dephasing rate Γφ, in units of ω_c.
    #[arg(long, value_name = "RATE", help_heading = "Model parameters")]
    gamma_phi: Option<f64>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Initial ⟨a² + a†²⟩.
    #[arg(long, default_value_t = 0.0, help_heading = "Initial condition")]
    x0: f64,
    /// Initial Im⟨a² − a†²⟩.
    #[arg(long, default_value_t = 0.0, help_heading = "Initial condition")]
    v0: f64,
    /// Initial ⟨a†a⟩.
    #[arg(long, default_value_t = 0.0, help_heading = "Initial condition")]
    n0: f64,
    /// Initial ⟨J_x⟩ (a small nonzero value breaks the symmetry).
    #[arg(long, default_value_t = 1e-3, help_heading = "Initial condition")]
    jx0: f64,
    /// Initial ⟨J_y⟩.
    #[arg(long, default_value_t = 0.0, help_heading = "Initial condition")]
    jy0: f64,
    /// Initial ⟨J_z⟩.
    #[arg(long, default_value_t = -1.0, help_heading = "Initial condition")]
    jz0: f64,
    /// Integration horizon, in units of 1/ω_c.
    #[arg(long, default_value_t = 200.0)]
    t_max: f64,
    /// Relative tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    /// Absolute tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-10)]
    abs_tol: f64,
    /// Write the trajectory CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SteadyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Also print the non-physical “−” discriminant root (diagnostic only).
    #[arg(long)]
    diagnostic_root: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct PhotonCurveArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Lower end of the g range, in units of ω_c.
    #[arg(long, value_name = "G")]
    g_min: f64,
    /// Upper end of the g range, in units of ω_c.
    #[arg(long, value_name = "G")]
    g_max: f64,
    /// Number of samples along the range.
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AxisArgs {
    /// Parameter swept along this axis: omega_c, omega_0, g, kappa,
    /// gamma_down, gamma_phi, or gamma (locks Γ↓ = Γφ).
    name: String,
    /// Axis minimum, in units of ω_c.
    min: f64,
    /// Axis maximum, in units of ω_c.
    max: f64,
    /// Number of grid points along the axis.
    points: usize,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// First axis as `name min max points` (e.g. `g 1 14 40`).
    #[arg(long, value_names = ["NAME", "MIN", "MAX", "POINTS"], num_args = 4)]
    axis1: Vec<String>,
    /// Second axis as `name min max points`.
    #[arg(long, value_names = ["NAME", "MIN", "MAX", "POINTS"], num_args = 4)]
    axis2: Vec<String>,
    /// Space the first axis logarithmically.
    #[arg(long)]
    axis1_log: bool,
    /// Space the second axis logarithmically.
    #[arg(long)]
    axis2_log: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also render an SVG heatmap here.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Parameter to bisect: omega_c, omega_0, g, kappa, gamma_down,
    /// gamma_phi, or gamma (locks Γ↓ = Γφ).
    #[arg(long, value_name = "NAME")]
    scan: String,
    /// Lower end of the bisection bracket.
    #[arg(long, value_name = "VALUE")]
    lo: f64,
    /// Upper end of the bisection bracket.
    #[arg(long, value_name = "VALUE")]
    hi: f64,
    /// Predicate whose flip is located: normal-unstable, super-stable, or
    /// super-exists.
    #[arg(long, value_name = "NAME")]
    predicate: String,
}

#[derive(Args)]
struct OracleArgs {
    /// Number of qubits (1–3) for a custom run; omitting both this and
    /// --cutoff runs the standard two-size suite.
    #[arg(long, value_name = "N")]
    n_qubits: Option<usize>,
    /// Fock cutoff (≥ 4) for a custom run.
    #[arg(long, value_name = "NPH")]
    cutoff: Option<usize>,
    /// Qubit frequency ω_0, in units of ω_c (custom runs only).
    #[arg(long, value_name = "FREQ")]
    omega_0: Option<f64>,
    /// Two-photon coupling g, in units of ω_c (custom runs only).
    #[arg(long, value_name = "FREQ")]
    g: Option<f64>,
    /// Photon loss rate κ, in units of ω_c (custom runs only).
    #[arg(long, value_name = "RATE")]
    kappa: Option<f64>,
    /// Qubit decay rate Γ↓, in units of ω_c (custom runs only).
    #[arg(long, value_name = "RATE")]
    gamma_down: Option<f64>,
    /// Qubit dephasing rate Γφ, in units of ω_c (custom runs only).
    #[arg(long, value_name = "RATE")]
    gamma_phi: Option<f64>,
}

/// A failure with the exit code it maps to.
enum Failure {
    /// Bad invocation: exit 2.
    Usage(String),
    /// Valid invocation, unanswerable request: exit 1.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Config(_) | Error::UnknownAxis(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Trajectory(args) => cmd_trajectory(args),
        Command::Steady(args) => cmd_steady(args),
        Command::Classify(args) => cmd_classify(args),
        Command::PhotonCurve(args) => cmd_photon_curve(args),
        Command::PhaseDiagram(args) => cmd_phase_diagram(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

// ---------------------------------------------------------------------------
// Parameter resolution: config file < flags; scanned axes fill their own key.

const PARAM_KEYS: [&str; 7] = [
    "omega_c",
    "omega_0",
    "g",
    "n_qubits",
    "kappa",
    "gamma_down",
    "gamma_phi",
];

fn parse_config(path: &PathBuf) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::Usage(format!("cannot read config {}: {e}", path.display()))
    })?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::Usage(format!(
                "config {}:{}: expected `key = value`, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !PARAM_KEYS.contains(&key) {
            return Err(Failure::Usage(format!(
                "config {}:{}: unknown key `{key}` (expected one of {})",
                path.display(),
                lineno + 1,
                PARAM_KEYS.join(", ")
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl ParamArgs {
    /// Resolves the final parameter set. `fill` provides lowest-precedence
    /// defaults for axes a subcommand scans anyway, so those flags need not
    /// be repeated.
    fn resolve(&self, scope: ValidationScope, fill: &[(ParamAxis, f64)]) -> CliResult<ModelParams> {
        let mut values: BTreeMap<&str, f64> = BTreeMap::new();
        let mut n_qubits: Option<usize> = None;

        if let Some(path) = &self.config {
            for (key, raw) in parse_config(path)? {
                if key == "n_qubits" {
                    n_qubits = Some(raw.parse().map_err(|_| {
                        Failure::Usage(format!("config key n_qubits: `{raw}` is not an integer"))
                    })?);
                } else {
                    let parsed: f64 = raw.parse().map_err(|_| {
                        Failure::Usage(format!("config key {key}: `{raw}` is not a number"))
                    })?;
                    // Keys are pre-validated; leak the small fixed set.
                    values.insert(PARAM_KEYS[PARAM_KEYS.iter().position(|k| *k == key).unwrap()], parsed);
                }
            }
        }

        let flag_overrides = [
            ("omega_c", self.omega_c),
            ("omega_0", self.omega_0),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma_down", self.gamma_down),
            ("gamma_phi", self.gamma_phi),
        ];
        for (key, value) in flag_overrides {
            if let Some(v) = value {
                values.insert(key, v);
            }
        }
        if let Some(n) = self.n_qubits {
            n_qubits = Some(n);
        }

        for (axis, default) in fill {
            match axis {
                ParamAxis::GammaPair => {
                    values.entry("gamma_down").or_insert(*default);
                    values.entry("gamma_phi").or_insert(*default);
                }
                other => {
                    values.entry(other.name()).or_insert(*default);
                }
            }
        }

        let mut missing: Vec<&str> = Vec::new();
        for key in ["omega_0", "g", "kappa", "gamma_down", "gamma_phi"] {
            if !values.contains_key(key) {
                missing.push(key);
            }
        }
        if n_qubits.is_none() {
            missing.push("n_qubits");
        }
        if !missing.is_empty() {
            return Err(Failure::Usage(format!(
                "missing required parameter(s): {} (pass --{} or set them in --config)",
                missing.join(", "),
                missing[0].replace('_', "-"),
            )));
        }

        let params = ModelParams {
            omega_c: values.get("omega_c").copied().unwrap_or(1.0),
            omega_0: values["omega_0"],
            g: values["g"],
            n_qubits: n_qubits.unwrap(),
            kappa: values["kappa"],
            gamma_down: values["gamma_down"],
            gamma_phi: values["gamma_phi"],
        };
        let params = params.validated(scope)?;
        Ok(params.in_omega_c_units())
    }
}

fn parse_axis(spec: &[String], log: bool) -> CliResult<AxisSpec> {
    if spec.len() != 4 {
        return Err(Failure::Usage(
            "each axis needs `NAME MIN MAX POINTS`".into(),
        ));
    }
    let param = ParamAxis::from_name(&spec[0])?;
    let num = |s: &String, what: &str| -> CliResult<f64> {
        s.parse()
            .map_err(|_| Failure::Usage(format!("axis {what}: `{s}` is not a number")))
    };
    let min = num(&spec[1], "minimum")?;
    let max = num(&spec[2], "maximum")?;
    let points: usize = spec[3]
        .parse()
        .map_err(|_| Failure::Usage(format!("axis points: `{}` is not an integer", spec[3])))?;
    Ok(if log {
        AxisSpec::log(param, min, max, points)
    } else {
        AxisSpec::linear(param, min, max, points)
    })
}

fn write_or_print(content: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => {
            dicke2p::textio::write_text(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn cmd_trajectory(args: TrajectoryArgs) -> CliResult<ExitCode> {
    let params = args.params.resolve(ValidationScope::Dynamics, &[])?;
    if !args.t_max.is_finite() || args.t_max <= 0.0 {
        return Err(Failure::Usage("--t-max must be > 0".into()));
    }
    if args.rel_tol <= 0.0 || args.abs_tol <= 0.0 {
        return Err(Failure::Usage("tolerances must be > 0".into()));
    }
    let state0 = MeanFieldState::new(args.x0, args.v0, args.n0, args.jx0, args.jy0, args.jz0);
    let traj = integrate(&state0, &params, args.t_max, args.rel_tol, args.abs_tol)?;
    let s = traj.final_state();
    let outcome = match traj.outcome {
        Outcome::Converged => format!("settled at t = {:.3}", traj.final_time()),
        Outcome::MaxTimeReached => "horizon reached".to_string(),
        Outcome::Diverged { escape_time } => format!("diverged at t = {escape_time:.3}"),
    };
    eprintln!(
        "{outcome}; final state x={:.6e} v={:.6e} n={:.6e} jx={:.6e} jy={:.6e} jz={:.6e}",
        s.x, s.v, s.n, s.jx, s.jy, s.jz
    );
    write_or_print(&traj.to_csv(), args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_steady(args: SteadyArgs) -> CliResult<ExitCode> {
    let params = args.params.resolve(ValidationScope::Dynamics, &[])?;
    println!(
        "normal        {}",
        dicke2p::normal_branch(&params).report(&params)
    );
    match superradiant_branches(&params) {
        Ok(Branches::Pair([plus, minus])) => {
            println!("superradiant+ {}", plus.report(&params));
            println!("superradiant- {}", minus.report(&params));
        }
        Ok(Branches::None(reason)) => {
            println!("superradiant  none ({reason:?})");
        }
        Err(e @ (Error::InvalidParams(_) | Error::BetaUndefined)) => {
            println!("superradiant  undefined ({e})");
        }
        Err(e) => return Err(e.into()),
    }
    if args.diagnostic_root {
        match dicke2p::superradiant_branches_with(&params, dicke2p::RootChoice::Diagnostic) {
            Ok(Branches::Pair([plus, minus])) => {
                println!("diagnostic+   {}", plus.report(&params));
                println!("diagnostic-   {}", minus.report(&params));
            }
            Ok(Branches::None(reason)) => println!("diagnostic    none ({reason:?})"),
            Err(e @ (Error::InvalidParams(_) | Error::BetaUndefined)) => {
                println!("diagnostic    undefined ({e})");
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: ClassifyArgs) -> CliResult<ExitCode> {
    let params = args.params.resolve(ValidationScope::Dynamics, &[])?;
    let verdict = classify(&params)?;
    let sup = match &verdict.superradiant {
        Some(r) => format!("{:.6e}", r.spectral_abscissa),
        None => "n/a".to_string(),
    };
    eprintln!(
        "abscissa normal {:.6e}, superradiant {sup}{}",
        verdict.normal.spectral_abscissa,
        if verdict.marginal { " (marginal)" } else { "" }
    );
    println!("{}", verdict.label.code());
    Ok(ExitCode::SUCCESS)
}

fn cmd_photon_curve(args: PhotonCurveArgs) -> CliResult<ExitCode> {
    let params = args
        .params
        .resolve(ValidationScope::Dynamics, &[(ParamAxis::G, args.g_min)])?;
    if args.points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    if !args.g_min.is_finite() || !args.g_max.is_finite() || args.g_min >= args.g_max {
        return Err(Failure::Usage("need finite --g-min < --g-max".into()));
    }
    let curve = photon_curve(&params, (args.g_min, args.g_max), args.points)?;
    match &args.out {
        Some(path) => write_csv(&curve, path)?,
        None => print!("{}", dicke2p::CsvArtifact::to_csv(&curve)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_phase_diagram(args: PhaseDiagramArgs) -> CliResult<ExitCode> {
    let axis1 = parse_axis(&args.axis1, args.axis1_log)?;
    let axis2 = parse_axis(&args.axis2, args.axis2_log)?;
    let fill = [(axis1.param, axis1.min), (axis2.param, axis2.min)];
    let base = args.params.resolve(ValidationScope::Dynamics, &fill)?;
    let config = SweepConfig {
        base,
        axis1,
        axis2,
    };
    let diagram = match args.workers {
        Some(n) => {
            if n == 0 {
                return Err(Failure::Usage("--workers must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Domain(format!("cannot build worker pool: {e}")))?;
            pool.install(|| grid_sweep(&config))?
        }
        None => grid_sweep(&config)?,
    };
    match &args.out {
        Some(path) => write_csv(&diagram, path)?,
        None => print!("{}", dicke2p::CsvArtifact::to_csv(&diagram)),
    }
    if let Some(path) = &args.svg {
        render_svg(&diagram, path)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_threshold(args: ThresholdArgs) -> CliResult<ExitCode> {
    let scan = ParamAxis::from_name(&args.scan)?;
    let predicate = match args.predicate.as_str() {
        "normal-unstable" => ScanPredicate::NormalUnstable,
        "super-stable" => ScanPredicate::SuperStable,
        "super-exists" => ScanPredicate::SuperExists,
        other => {
            return Err(Failure::Usage(format!(
                "unknown predicate `{other}` (expected normal-unstable, super-stable or super-exists)"
            )))
        }
    };
    if !args.lo.is_finite() || !args.hi.is_finite() || args.lo >= args.hi {
        return Err(Failure::Usage("need finite --lo < --hi".into()));
    }
    let base = args
        .params
        .resolve(ValidationScope::Dynamics, &[(scan, args.lo.max(1e-12))])?;
    let result = threshold_scan(&base, scan, (args.lo, args.hi), predicate)?;
    let crossing = match result.crossing {
        CrossingType::RealEigenvalue => "real-eigenvalue",
        CrossingType::ComplexPair => "complex-pair",
        CrossingType::ExistenceEdge => "existence-edge",
    };
    eprintln!(
        "predicate {} at the low end; crossing type {crossing}; final bracket width {:.1e}",
        if result.holds_at_low { "holds" } else { "fails" },
        result
            .brackets
            .last()
            .map(|(lo, hi)| hi - lo)
            .unwrap_or(f64::NAN)
    );
    println!("{} {crossing}", format_float(result.critical));
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> CliResult<ExitCode> {
    let custom = args.n_qubits.is_some() || args.cutoff.is_some();
    let report = if custom {
        let n = args.n_qubits.unwrap_or(1);
        let spec = HilbertSpec::new(n, args.cutoff.unwrap_or(24))?;
        let mut params = suite_params(n);
        if let Some(v) = args.omega_0 {
            params.omega_0 = v;
        }
        if let Some(v) = args.g {
            params.g = v;
        }
        if let Some(v) = args.kappa {
            params.kappa = v;
        }
        if let Some(v) = args.gamma_down {
            params.gamma_down = v;
        }
        if let Some(v) = args.gamma_phi {
            params.gamma_phi = v;
        }
        run_suite_for(&params, &spec)?
    } else {
        run_suite()?
    };
    print!("{}", report.to_text());
    if report.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Domain("oracle suite reported failures".into()))
    }
}
