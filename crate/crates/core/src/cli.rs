//! The `spinshape` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dirac::DiracOperator;
use crate::error::{Error, Result};
use crate::mesh::io::{load, write_metricmesh, write_obj, LoadedMesh};
use crate::mesh::{HomologyBasis, MetricMesh};
use crate::reconstruct::{derive_spinor_from_embedding, diagnostics, integrate, DistortionReport};
use crate::shapes::{self, diameter};
use crate::solve::{minimize, Init, Mode, SolveConfig, Termination, TraceEntry};
use crate::spin::{
    base_spin_structure, bits_to_string, build_face_charts, enumerate_spin_classes, parse_bits,
    structure_for_bits, transition_lifts, SpinStructure,
};

pub const REPORT_SCHEMA: u32 = 1;
pub const THREADS_VAR: &str = "SPINSHAPE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "spinshape",
    version,
    about = "Surfaces from quaternionic spinor fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check mesh and metric invariants and print the genus.
    Validate { path: PathBuf },
    /// Spin structure commands.
    #[command(subcommand)]
    Spin(SpinCommand),
    /// Minimize the spinor energy and reconstruct a surface.
    Solve(SolveArgs),
    /// Derive the spinor field of an embedded OBJ and integrate it back.
    Roundtrip {
        path: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write one of the bundled test shapes.
    Generate(GenerateArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpinCommand {
    /// List every spin class with the number of edges carrying sign -1.
    Enumerate {
        path: PathBuf,
        #[arg(long)]
        dump_signs: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Conformal,
    Isometric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitArg {
    Ones,
    Random,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "conformal")]
    pub mode: ModeArg,
    /// Bit string of length 2p; all zeros when omitted.
    #[arg(long)]
    pub spin_class: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub eps1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps2: f64,
    /// Initial Willmore weight.
    #[arg(long, default_value_t = 1.0)]
    pub eps3: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps3_decay: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub eps3_floor: f64,
    #[arg(long, default_value_t = 1.0)]
    pub period_weight: f64,
    #[arg(long, default_value_t = 2.0)]
    pub period_growth: f64,
    #[arg(long, default_value_t = 40)]
    pub max_outer: usize,
    #[arg(long, default_value_t = 500)]
    pub max_inner: usize,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub residual_target: f64,
    #[arg(long, value_enum, default_value = "ones")]
    pub init: InitArg,
    #[arg(long, default_value_t = 0.1)]
    pub init_noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

impl SolveArgs {
    pub fn config(&self) -> SolveConfig {
        SolveConfig {
            mode: match self.mode {
                ModeArg::Conformal => Mode::Conformal,
                ModeArg::Isometric => Mode::Isometric,
            },
            eps1: self.eps1,
            eps2: self.eps2,
            eps3_init: self.eps3,
            eps3_decay: self.eps3_decay,
            eps3_floor: self.eps3_floor,
            period_weight: self.period_weight,
            period_growth: self.period_growth,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            grad_tol: self.grad_tol,
            residual_target: self.residual_target,
            rng_seed: self.seed,
            init: match self.init {
                InitArg::Ones => Init::Ones,
                InitArg::Random => Init::Random,
            },
            init_noise: self.init_noise,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ShapeArg {
    Icosphere,
    CubeSphere,
    TorusOfRevolution,
    FlatTorus,
    SevenVertexTorus,
    DoubleTorus,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub shape: ShapeArg,
    /// Subdivision level, or grid size along the first direction.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Grid size along the second direction.
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    /// `.obj` writes positions, anything else the intrinsic metric.
    #[arg(short = 'o', long)]
    pub output: PathBuf,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: Error,
}

fn invalid(error: Error) -> Failure {
    Failure { code: 1, error }
}

/// Invalid configurations are the caller's fault; anything else raised
/// while solving is internal.
fn internal(error: Error) -> Failure {
    let code = match root(&error) {
        Error::InvalidConfig(_) => 1,
        _ => 3,
    };
    Failure { code, error }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::AtIteration { source, .. } => root(source),
        e => e,
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // exit code 2 is reserved for unmet solver targets
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    configure_threads();
    run(cli)
}

pub fn run(cli: Cli) -> ExitCode {
    let outcome = match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Spin(SpinCommand::Enumerate { path, dump_signs }) => {
            cmd_spin_enumerate(&path, dump_signs.as_deref())
        }
        Command::Solve(args) => cmd_solve(&args),
        Command::Roundtrip { path, report } => cmd_roundtrip(&path, report.as_deref()),
        Command::Generate(args) => cmd_generate(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            // the global pool can only be set once per process
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| invalid(e.into()))
}

fn base_structure(metric: &MetricMesh) -> Result<SpinStructure> {
    let lifts = transition_lifts(metric, &build_face_charts(metric)?);
    base_spin_structure(metric, &lifts)
}

fn cmd_validate(path: &Path) -> std::result::Result<u8, Failure> {
    let loaded = load(path).map_err(invalid)?;
    build_face_charts(&loaded.metric).map_err(invalid)?;
    let mesh = loaded.metric.mesh();
    println!("genus {}", mesh.genus());
    println!(
        "vertices {} edges {} faces {}",
        mesh.vertex_count(),
        mesh.edge_count(),
        mesh.face_count()
    );
    Ok(0)
}

fn cmd_spin_enumerate(path: &Path, dump: Option<&Path>) -> std::result::Result<u8, Failure> {
    let metric = load(path).map_err(invalid)?.metric;
    let base = base_structure(&metric).map_err(invalid)?;
    let hb = HomologyBasis::new(metric.mesh());
    let classes = enumerate_spin_classes(&metric, &base, &hb);
    let mut signs = String::new();
    for s in &classes {
        println!("class {} edges-flipped {}", s.label(), s.flipped_count());
        signs.push_str(&format!("class {}\n", s.label()));
        for (e, [i, j]) in metric.mesh().edges().iter().enumerate() {
            signs.push_str(&format!("s {i} {j} {:+}\n", s.signs[e]));
        }
    }
    if let Some(p) = dump {
        write_file(p, &signs)?;
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct InputSummary {
    pub path: String,
    #[serde(rename = "V")]
    pub vertices: usize,
    #[serde(rename = "E")]
    pub edges: usize,
    #[serde(rename = "F")]
    pub faces: usize,
    pub genus: usize,
}

impl InputSummary {
    fn new(path: &Path, metric: &MetricMesh) -> Self {
        let m = metric.mesh();
        InputSummary {
            path: path.display().to_string(),
            vertices: m.vertex_count(),
            edges: m.edge_count(),
            faces: m.face_count(),
            genus: m.genus(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DistortionSummary {
    pub max_conformal_distortion: f64,
    pub median_conformal_distortion: f64,
    pub median_length_error: f64,
    pub max_length_error: f64,
    pub willmore_channel: Option<f64>,
    pub willmore_dihedral: f64,
}

impl From<&DistortionReport> for DistortionSummary {
    fn from(r: &DistortionReport) -> Self {
        DistortionSummary {
            max_conformal_distortion: r.max_conformal_distortion,
            median_conformal_distortion: r.median_conformal_distortion,
            median_length_error: r.median_length_error,
            max_length_error: r.max_length_error,
            willmore_channel: r.willmore_channel,
            willmore_dihedral: r.willmore_dihedral,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Reconstruction {
    pub closure_max: f64,
    pub closure_rms: f64,
    pub max_edge_mismatch: f64,
    /// Mean length of the averaged edge vectors.
    pub mean_edge_length: f64,
}

#[derive(Debug, Serialize)]
pub struct SolveSummary {
    pub converged: bool,
    pub termination: Termination,
    pub channel_residual: f64,
    pub period_norms: Vec<f64>,
    pub willmore: f64,
    pub reconstruction: Reconstruction,
    pub distortion: DistortionSummary,
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub schema: u32,
    pub spinshape: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            schema: REPORT_SCHEMA,
            spinshape: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub input: InputSummary,
    pub spin_class: String,
    pub config: SolveConfig,
    pub trace: Vec<TraceEntry>,
    pub result: SolveSummary,
    pub versions: Versions,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_solve(args: &SolveArgs) -> std::result::Result<u8, Failure> {
    let cfg = args.config();
    cfg.validate().map_err(invalid)?;
    let LoadedMesh { metric, .. } = load(&args.path).map_err(invalid)?;
    let genus = metric.mesh().genus();
    let bits = match &args.spin_class {
        Some(s) => parse_bits(s)
            .filter(|b| b.len() == 2 * genus)
            .ok_or_else(|| {
                invalid(Error::InvalidConfig(format!(
                    "spin class {s:?} must be a bit string of length {}",
                    2 * genus
                )))
            })?,
        None => vec![false; 2 * genus],
    };
    let base = base_structure(&metric).map_err(invalid)?;
    let hb = HomologyBasis::new(metric.mesh());
    let spin = structure_for_bits(&metric, &base, &hb, &bits);
    let input = InputSummary::new(&args.path, &metric);
    let op = DiracOperator::new(metric, spin).map_err(internal)?;

    let result = minimize(&op, &cfg).map_err(internal)?;
    let immersion = integrate(&op, &result.psi).map_err(internal)?;
    let channels = op.channels(&result.psi).map_err(internal)?;
    let distortion =
        diagnostics(op.metric(), &immersion.positions, Some(&channels)).map_err(internal)?;
    let mesh = op.metric().mesh();
    let mean_edge_length = (0..mesh.edge_count())
        .map(|e| op.averaged_one_form(&result.psi, e).norm())
        .sum::<f64>()
        / mesh.edge_count() as f64;

    if let Some(p) = &args.output {
        write_file(p, &write_obj(&immersion.positions, mesh.faces()))?;
    }
    let report = RunReport {
        input,
        spin_class: bits_to_string(&bits),
        config: cfg,
        result: SolveSummary {
            converged: result.converged,
            termination: result.termination,
            channel_residual: result.channel_residual,
            period_norms: result.period_norms.clone(),
            willmore: distortion.willmore(),
            reconstruction: Reconstruction {
                closure_max: immersion.closure_max,
                closure_rms: immersion.closure_rms,
                max_edge_mismatch: op.max_edge_mismatch(&result.psi),
                mean_edge_length,
            },
            distortion: (&distortion).into(),
        },
        trace: result.trace,
        versions: Versions::default(),
        timestamp: timestamp(),
    };
    if let Some(p) = &args.report {
        write_file(p, &to_json(&report))?;
    }
    let r = &report.result;
    println!(
        "{} after {} outer iterations: channel residual {:.3e}, periods {:?}, willmore {:.6}",
        if r.converged {
            "converged"
        } else {
            "targets unmet"
        },
        report.trace.len(),
        r.channel_residual,
        r.period_norms,
        r.willmore
    );
    Ok(if r.converged { 0 } else { 2 })
}

#[derive(Debug, Serialize)]
pub struct RoundtripReport {
    pub input: InputSummary,
    pub spin_class: String,
    pub diameter: f64,
    pub max_position_error: f64,
    pub max_edge_mismatch: f64,
    pub period_norms: Vec<f64>,
    pub median_mean_curvature: f64,
    pub e_alpha: f64,
    pub e_v: f64,
    pub distortion: DistortionSummary,
    pub versions: Versions,
}

fn cmd_roundtrip(path: &Path, report_path: Option<&Path>) -> std::result::Result<u8, Failure> {
    let loaded = load(path).map_err(invalid)?;
    let positions = loaded.positions.ok_or_else(|| {
        invalid(Error::InvalidConfig(
            "roundtrip needs an OBJ with positions".into(),
        ))
    })?;
    let (psi, spin, metric) =
        derive_spinor_from_embedding(loaded.metric.mesh(), &positions).map_err(invalid)?;
    let input = InputSummary::new(path, &metric);
    let op = DiracOperator::new(metric, spin).map_err(internal)?;
    let channels = op.channels(&psi).map_err(internal)?;
    let immersion = integrate(&op, &psi).map_err(internal)?;
    let shift = positions[0] - immersion.positions[0];
    let error = positions
        .iter()
        .zip(&immersion.positions)
        .map(|(p, q)| (*p - *q - shift).norm())
        .fold(0.0, f64::max);
    let distortion =
        diagnostics(op.metric(), &immersion.positions, Some(&channels)).map_err(internal)?;
    let energy = op
        .energy_value(&psi, &crate::dirac::EnergyWeights::new(1.0, 1.0, 0.0, 0.0))
        .map_err(internal)?;
    let mut h: Vec<f64> = channels.faces.iter().map(|c| c.mean_curvature()).collect();
    h.sort_by(f64::total_cmp);
    let diam = diameter(&positions);
    let report = RoundtripReport {
        input,
        spin_class: op.spin().label(),
        diameter: diam,
        max_position_error: error,
        max_edge_mismatch: op.max_edge_mismatch(&psi),
        period_norms: op.periods(&psi).iter().map(|p| p.norm()).collect(),
        median_mean_curvature: h[h.len() / 2],
        e_alpha: energy.e_alpha,
        e_v: energy.e_v,
        distortion: (&distortion).into(),
        versions: Versions::default(),
    };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "spin class {:?}", report.spin_class);
    let _ = writeln!(
        out,
        "max position error {:.3e} (diameter {:.6})",
        error, diam
    );
    let _ = writeln!(out, "max edge mismatch {:.3e}", report.max_edge_mismatch);
    let _ = writeln!(out, "period norms {:?}", report.period_norms);
    let _ = writeln!(
        out,
        "median mean curvature {:.6}",
        report.median_mean_curvature
    );
    let _ = writeln!(
        out,
        "willmore channel {:.6} dihedral {:.6}",
        distortion.willmore_channel.unwrap_or(f64::NAN),
        distortion.willmore_dihedral
    );
    if let Some(p) = report_path {
        write_file(p, &to_json(&report))?;
    }
    Ok(if error <= 1e-8 * diam { 0 } else { 1 })
}

fn cmd_generate(args: &GenerateArgs) -> std::result::Result<u8, Failure> {
    let (n, m) = (args.n, args.m);
    let bad = |msg: &str| invalid(Error::InvalidConfig(msg.into()));
    let shape = match args.shape {
        ShapeArg::Icosphere => shapes::icosphere(n),
        ShapeArg::CubeSphere if n >= 1 => shapes::cube_sphere(n),
        ShapeArg::TorusOfRevolution if n >= 3 && m >= 3 => {
            shapes::torus_of_revolution(n, m, 1.0, 0.4)
        }
        ShapeArg::FlatTorus if n >= 3 && m >= 3 => shapes::flat_torus(n, m, 1.0, 1.0),
        ShapeArg::SevenVertexTorus => shapes::seven_vertex_torus(),
        ShapeArg::DoubleTorus => shapes::double_torus(),
        _ => {
            return Err(bad(
                "grid sizes must be at least 3 and subdivisions at least 1",
            ))
        }
    };
    let obj = args.output.extension().is_some_and(|e| e == "obj");
    if obj && matches!(args.shape, ShapeArg::FlatTorus) {
        return Err(bad(
            "a flat torus has no embedding; write a metricmesh instead",
        ));
    }
    let text = if obj {
        write_obj(&shape.positions, shape.mesh.faces())
    } else {
        write_metricmesh(&shape.metric())
    };
    write_file(&args.output, &text)?;
    Ok(0)
}
