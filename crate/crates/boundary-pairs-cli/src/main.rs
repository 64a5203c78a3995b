//! Command-line driver: reads graph/chain/interval descriptions, runs the
//! spectral scans and verification suites, and emits machine-readable
//! reports. Exit code 0 when every check passes, 1 on check failures, 2 on
//! input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use boundary_pairs::analytic::{ChainPair, IntervalPair};
use boundary_pairs::constructions::{
    bounded_modification, coupled_krein_residual, dirichlet_coupled_pair, glue_graphs,
    glue_neumann, glued_parts, robin, RobinParameter,
};
use boundary_pairs::graph::{graph_pair, GraphModel};
use boundary_pairs::numcore::{solve, spectral_norm, CMatrix};
use boundary_pairs::pair::FiniteBoundaryPair;
use boundary_pairs::report::{Check, DtnTable, Report, SpectrumEntry, SpectrumTable};
use boundary_pairs::samples;
use boundary_pairs::spectral::{
    find_neumann_eigenvalues, herglotz_suite, identity_suite, monotonicity_suite, ChainProvider,
    DtnProvider, IntervalProvider, SpectralScan,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Boundary-pair calculus at desk scale: Dirichlet-to-Neumann families,
/// Krein resolvent checks and DtN-pencil spectra.
#[derive(Parser)]
#[command(name = "boundary-pairs", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate Neumann eigenvalues as zeros of the DtN pencil and report them.
    Analyze {
        #[command(subcommand)]
        target: AnalyzeTarget,
    },
    /// Run the identity and property suites and report residuals.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Build derived models (glue, sum) or DtN tables (robin, dcouple,
    /// boundedmod) from one or two inputs.
    Construct {
        #[command(subcommand)]
        op: ConstructOp,
    },
}

#[derive(Subcommand)]
enum AnalyzeTarget {
    /// A weighted graph with boundary vertices (JSON).
    Graph(CommonArgs),
    /// A partitioned interval chain with boundary weights (JSON).
    Chain(CommonArgs),
    /// A single interval with both endpoints as boundary (JSON).
    Interval(CommonArgs),
}

#[derive(Subcommand)]
enum VerifyTarget {
    Graph(CommonArgs),
    Chain(CommonArgs),
    Interval(CommonArgs),
    /// A seeded random matrix pair: N = G°G + diagonal jitter, random
    /// full-rank Gamma.
    Random(RandomArgs),
}

#[derive(Subcommand)]
enum ConstructOp {
    /// Robin perturbation: DtN table of Lambda(z) + a at the given samples.
    Robin(RobinArgs),
    /// Neumann gluing of two graphs along their shared boundary ids; writes
    /// the glued graph model.
    Glue(CommonArgs),
    /// Direct sum of two graph models (disjoint union); writes the model.
    Sum(CommonArgs),
    /// Dirichlet coupling at the NtD level: table of the coupled DtN.
    Dcouple(CommonArgs),
    /// Bounded modification: table of Lambda(-1)^{-1} Lambda(z) with the
    /// norm bound L(z).
    Boundedmod(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Primary input file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Second input file (glue, sum, dcouple).
    #[arg(long)]
    input2: Option<PathBuf>,
    /// Real spectral window A B.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    /// Samples per Dirichlet-free gap.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Root acceptance tolerance on the smallest pencil eigenvalue.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Pole-exclusion radius around the excised spectra.
    #[arg(long, default_value_t = 1e-8)]
    delta: f64,
    /// Spectral sample, repeatable. Grammar: "a", "bi" or "a+bi" / "a-bi"
    /// with decimal (optionally scientific) parts, e.g. -1, 2.5+1i,
    /// 0.5-1e-3i.
    #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
    z: Vec<Complex64>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted. Writes are atomic (temp + rename).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct RandomArgs {
    /// State dimension.
    #[arg(long)]
    n: usize,
    /// Boundary dimension.
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct RobinArgs {
    /// Robin constant, a >= 0.
    #[arg(long)]
    a: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Parses "a+bi" complex literals: an optional real part and an optional
/// imaginary part ending in `i`, each a decimal or scientific float.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if !t.ends_with(['i', 'I']) {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("bad real literal '{t}': {e}"));
    }
    let body = &t[..t.len() - 1];
    // Split at the last +/- that is not a leading sign and not part of an
    // exponent; everything after it is the imaginary coefficient.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse::<f64>()
            .map_err(|e| format!("bad real part '{re_str}': {e}"))?
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => im_str
            .parse::<f64>()
            .map_err(|e| format!("bad imaginary part '{im_str}': {e}"))?,
    };
    Ok(Complex64::new(re, im))
}

/// Input-side failures exit with 2, check failures with 1.
enum RunError {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for RunError {
    fn from(e: E) -> Self {
        RunError::Input(e.to_string())
    }
}

type RunResult = Result<Report, RunError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common) = match &cli.command {
        Command::Analyze { target } => match target {
            AnalyzeTarget::Graph(c) => (analyze_graph(c), c.clone()),
            AnalyzeTarget::Chain(c) => (analyze_chain(c), c.clone()),
            AnalyzeTarget::Interval(c) => (analyze_interval(c), c.clone()),
        },
        Command::Verify { target } => match target {
            VerifyTarget::Graph(c) => (verify_graph(c), c.clone()),
            VerifyTarget::Chain(c) => (verify_chain(c), c.clone()),
            VerifyTarget::Interval(c) => (verify_interval(c), c.clone()),
            VerifyTarget::Random(ra) => (verify_random(ra), ra.common.clone()),
        },
        Command::Construct { op } => match op {
            ConstructOp::Robin(ra) => (construct_robin(ra), ra.common.clone()),
            ConstructOp::Glue(c) => return run_model_output(construct_glue(c), c),
            ConstructOp::Sum(c) => return run_model_output(construct_sum(c), c),
            ConstructOp::Dcouple(c) => (construct_dcouple(c), c.clone()),
            ConstructOp::Boundedmod(c) => (construct_boundedmod(c), c.clone()),
        },
    };
    match result {
        Ok(report) => {
            let body = match common.format {
                Format::Json => report.to_canonical_json(),
                Format::Csv => report.spectra_csv(),
            };
            if let Err(e) = emit(&common.out, &body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run_model_output(result: Result<GraphModel, RunError>, common: &CommonArgs) -> ExitCode {
    match result {
        Ok(model) => {
            let value = serde_json::to_value(&model).expect("model serializes");
            let mut body = serde_json::to_string_pretty(&value).expect("model encodes");
            body.push('\n');
            if let Err(e) = emit(&common.out, &body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Atomic output: whole-file temp write followed by a rename; no partial
/// reports on failure.
fn emit(out: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
            fs::write(&tmp, body)?;
            fs::rename(&tmp, path)
        }
    }
}

fn digest_file(path: &Path) -> Result<(String, Vec<u8>), RunError> {
    let bytes =
        fs::read(path).map_err(|e| RunError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok((digest, bytes))
}

fn require_input(common: &CommonArgs) -> Result<&PathBuf, RunError> {
    common
        .input
        .as_ref()
        .ok_or_else(|| RunError::Input("--input is required for this subcommand".into()))
}

fn require_window(common: &CommonArgs) -> Result<(f64, f64), RunError> {
    let w = common
        .window
        .as_ref()
        .ok_or_else(|| RunError::Input("--window A B is required for this subcommand".into()))?;
    Ok((w[0], w[1]))
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T, RunError> {
    serde_json::from_slice(bytes).map_err(|e| {
        RunError::Input(format!(
            "{what} parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn load_graph(common: &CommonArgs) -> Result<(GraphModel, String), RunError> {
    let path = require_input(common)?;
    let (digest, bytes) = digest_file(path)?;
    let model: GraphModel = parse_json(&bytes, "graph")?;
    model
        .validate()
        .map_err(|e| RunError::Input(format!("schema violation: {e}")))?;
    Ok((model, digest))
}

fn load_chain(common: &CommonArgs) -> Result<(ChainPair, String), RunError> {
    let path = require_input(common)?;
    let (digest, bytes) = digest_file(path)?;
    #[derive(serde::Deserialize)]
    struct ChainFile {
        lengths: Vec<f64>,
        rhos: Vec<f64>,
    }
    let raw: ChainFile = parse_json(&bytes, "chain")?;
    let chain = ChainPair::new(raw.lengths, raw.rhos)
        .map_err(|e| RunError::Input(format!("schema violation: {e}")))?;
    Ok((chain, digest))
}

fn load_interval(common: &CommonArgs) -> Result<(IntervalPair, String), RunError> {
    let path = require_input(common)?;
    let (digest, bytes) = digest_file(path)?;
    #[derive(serde::Deserialize)]
    struct IntervalFile {
        length: f64,
    }
    let raw: IntervalFile = parse_json(&bytes, "interval")?;
    let interval = IntervalPair::new(raw.length)
        .map_err(|e| RunError::Input(format!("schema violation: {e}")))?;
    Ok((interval, digest))
}

fn new_report(digest: &str) -> Report {
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    Report::new(VERSION, digest, &timestamp)
}

fn scan_into_report(report: &mut Report, scan: &SpectralScan, label: &str, tol: f64) {
    report.spectra.push(SpectrumTable {
        label: label.into(),
        values: scan
            .hits
            .iter()
            .map(|h| SpectrumEntry {
                value: h.lambda,
                multiplicity: h.multiplicity,
            })
            .collect(),
    });
    let worst_regular = scan
        .hits
        .iter()
        .filter(|h| !h.on_dirichlet_point)
        .map(|h| h.min_eig_residual)
        .fold(0.0, f64::max);
    report
        .checks
        .push(Check::new("pencil_zero_residual_max", worst_regular, tol));
    report.warnings.extend(scan.warnings.iter().cloned());
}

fn default_identity_samples(common: &CommonArgs, pair: &FiniteBoundaryPair) -> Vec<Complex64> {
    if !common.z.is_empty() {
        return common.z.clone();
    }
    let hi = pair
        .neumann_eigenvalues()
        .last()
        .copied()
        .unwrap_or(1.0)
        .max(1.0);
    vec![
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.5 * hi, 1.0),
        Complex64::new(0.37 * hi, 0.91),
    ]
}

const HERGLOTZ_SAMPLES: [Complex64; 3] = [
    Complex64::new(0.0, 1.0),
    Complex64::new(1.0, 1.0),
    Complex64::new(3.0, 0.5),
];

fn identity_into_report(report: &mut Report, pair: &FiniteBoundaryPair, common: &CommonArgs) {
    let zs = default_identity_samples(common, pair);
    match identity_suite(pair, &zs, common.seed) {
        Ok(rep) => {
            for c in rep.checks {
                report.checks.push(Check::new(c.name, c.residual, c.threshold));
            }
        }
        Err(e) => report.warnings.push(format!("identity suite skipped: {e}")),
    }
    match herglotz_suite(pair, &HERGLOTZ_SAMPLES) {
        Ok(rep) => {
            report.checks.push(Check::new(
                "herglotz_dtn_im_max",
                rep.worst_dtn_im_max,
                1e-12,
            ));
            report.checks.push(Check::new(
                "herglotz_ntd_im_min",
                -rep.worst_ntd_im_min,
                1e-12,
            ));
        }
        Err(e) => report.warnings.push(format!("herglotz suite skipped: {e}")),
    }
}

fn constants_into_report(report: &mut Report, pair: &FiniteBoundaryPair) {
    match pair.classification_constants() {
        Ok(k) => {
            report.constants.c_pos = Some(k.c_pos);
            report.constants.c_ell = Some(k.c_ell);
            report.constants.gamma_norm = Some(k.gamma_norm_dtn);
            report.constants.gamma_norm_h1 = Some(k.gamma_norm_h1);
            report.checks.push(Check::new(
                "gamma_norm_route_agreement",
                k.gamma_norm_rel_diff(),
                1e-10,
            ));
        }
        Err(e) => report.warnings.push(format!("constants skipped: {e}")),
    }
}

fn eigs_table(label: &str, eigs: &[f64]) -> SpectrumTable {
    // Collapse numerically equal eigenvalues into multiplicities.
    let mut values: Vec<SpectrumEntry> = Vec::new();
    for &l in eigs {
        match values.last_mut() {
            Some(e) if (l - e.value).abs() <= 1e-9 * (1.0 + l.abs()) => e.multiplicity += 1,
            _ => values.push(SpectrumEntry {
                value: l,
                multiplicity: 1,
            }),
        }
    }
    SpectrumTable {
        label: label.into(),
        values,
    }
}

fn analyze_graph(common: &CommonArgs) -> RunResult {
    let (model, digest) = load_graph(common)?;
    let pair = graph_pair(&model)?.with_delta(common.delta);
    let window = require_window(common)?;
    let mut report = new_report(&digest);
    let scan = find_neumann_eigenvalues(&pair, window, common.grid, common.tol)?;
    scan_into_report(&mut report, &scan, "neumann_pencil_zeros", common.tol);
    report
        .spectra
        .push(eigs_table("neumann_eigenvalues", pair.neumann_eigenvalues()));
    report
        .spectra
        .push(eigs_table("dirichlet_eigenvalues", pair.dirichlet_spectrum()));
    identity_into_report(&mut report, &pair, common);
    constants_into_report(&mut report, &pair);
    Ok(report)
}

fn analyze_chain(common: &CommonArgs) -> RunResult {
    let (chain, digest) = load_chain(common)?;
    let provider = ChainProvider::new(chain.clone()).with_delta(common.delta);
    let window = require_window(common)?;
    let mut report = new_report(&digest);
    let scan = find_neumann_eigenvalues(&provider, window, common.grid, common.tol)?;
    scan_into_report(&mut report, &scan, "neumann_pencil_zeros", common.tol);
    let dirichlet = chain.dirichlet_spectrum_below(window.1.max(0.0));
    report
        .spectra
        .push(eigs_table("dirichlet_eigenvalues", &dirichlet));
    Ok(report)
}

fn analyze_interval(common: &CommonArgs) -> RunResult {
    let (interval, digest) = load_interval(common)?;
    let provider = IntervalProvider::new(interval).with_delta(common.delta);
    let window = require_window(common)?;
    let mut report = new_report(&digest);
    let scan = find_neumann_eigenvalues(&provider, window, common.grid, common.tol)?;
    scan_into_report(&mut report, &scan, "neumann_pencil_zeros", common.tol);
    let dirichlet = interval.dirichlet_spectrum_below(window.1.max(0.0));
    report
        .spectra
        .push(eigs_table("dirichlet_eigenvalues", &dirichlet));
    Ok(report)
}

fn monotonicity_into_report(
    report: &mut Report,
    provider: &dyn DtnProvider,
    window: (f64, f64),
) {
    // Sample every Dirichlet-free subinterval of the window with 64 points.
    let delta = provider.delta();
    let mut cuts = vec![window.0];
    for p in provider.dirichlet_points_in(window.0, window.1) {
        cuts.push(p - 2.0 * delta);
        cuts.push(p + 2.0 * delta);
    }
    cuts.push(window.1);
    let mut worst = f64::NEG_INFINITY;
    let mut any = false;
    for pair in cuts.chunks(2) {
        if pair.len() == 2 && pair[1] - pair[0] > 1e-3 {
            if let Ok(rep) = monotonicity_suite(provider, (pair[0], pair[1]), 64) {
                worst = worst.max(rep.max_violation);
                any = true;
            }
        }
    }
    if any {
        report
            .checks
            .push(Check::new("branch_monotonicity_max_increase", worst, 1e-10));
    }
}

fn verify_graph(common: &CommonArgs) -> RunResult {
    let (model, digest) = load_graph(common)?;
    let pair = graph_pair(&model)?.with_delta(common.delta);
    let mut report = new_report(&digest);
    identity_into_report(&mut report, &pair, common);
    constants_into_report(&mut report, &pair);

    // Schur complement cross-check at the identity-suite samples.
    let mut worst = 0.0f64;
    for z in default_identity_samples(common, &pair) {
        if pair.dist_to_dirichlet(z) < pair.delta() {
            continue;
        }
        let a = pair.dtn(z)?;
        let b = pair.schur_dtn(z)?;
        worst = worst.max(spectral_norm(&(a - b)));
    }
    report
        .checks
        .push(Check::new("schur_vs_weak_dtn", worst, 1e-12));

    let hi = pair.neumann_eigenvalues().last().copied().unwrap_or(1.0) + 0.5;
    monotonicity_into_report(&mut report, &pair, (-1.0, hi));
    Ok(report)
}

fn verify_chain(common: &CommonArgs) -> RunResult {
    let (chain, digest) = load_chain(common)?;
    let provider = ChainProvider::new(chain.clone()).with_delta(common.delta);
    let mut report = new_report(&digest);

    // Assembly consistency: the chain DtN equals the per-interval 2x2
    // blocks embedded with rho^{-1/2} scalings; independent code paths.
    let zs: Vec<Complex64> = if common.z.is_empty() {
        vec![Complex64::new(-1.0, 0.0), Complex64::new(0.9, 0.4)]
    } else {
        common.z.clone()
    };
    let mut worst_assembly = 0.0f64;
    let mut worst_sym = 0.0f64;
    let n = chain.boundary_points();
    for &z in &zs {
        let lam = provider.dtn(z)?;
        let mut assembled = CMatrix::zeros(n, n);
        let block0 = boundary_pairs::analytic::interval_dtn_delta(chain.lengths[0], z, common.delta)?;
        assembled[(0, 0)] += block0[(1, 1)] / chain.rhos[0];
        for e in 1..n {
            let block =
                boundary_pairs::analytic::interval_dtn_delta(chain.lengths[e], z, common.delta)?;
            let (i, j) = (e - 1, e);
            let si = 1.0 / chain.rhos[i].sqrt();
            let sj = 1.0 / chain.rhos[j].sqrt();
            assembled[(i, i)] += block[(0, 0)] * (si * si);
            assembled[(i, j)] += block[(0, 1)] * (si * sj);
            assembled[(j, i)] += block[(1, 0)] * (si * sj);
            assembled[(j, j)] += block[(1, 1)] * (sj * sj);
        }
        worst_assembly = worst_assembly.max(spectral_norm(&(&lam - &assembled)));
        if z.im == 0.0 {
            worst_sym = worst_sym.max(spectral_norm(&(&lam - lam.adjoint())));
        }
    }
    report
        .checks
        .push(Check::new("interval_block_assembly", worst_assembly, 1e-13));
    report
        .checks
        .push(Check::new("real_z_hermiticity", worst_sym, 1e-12));

    if let Some(w) = &common.window {
        monotonicity_into_report(&mut report, &provider, (w[0], w[1]));
    }
    Ok(report)
}

fn verify_interval(common: &CommonArgs) -> RunResult {
    let (interval, digest) = load_interval(common)?;
    let l = interval.length;
    let provider = IntervalProvider::new(interval).with_delta(common.delta);
    let mut report = new_report(&digest);

    // Closed forms at z = 0 and the norm identity at z = -1.
    let lam0 = provider.dtn(Complex64::ZERO)?;
    let want = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0 / l, 0.0),
            Complex64::new(-1.0 / l, 0.0),
            Complex64::new(-1.0 / l, 0.0),
            Complex64::new(1.0 / l, 0.0),
        ],
    );
    report.checks.push(Check::new(
        "dtn_at_zero_closed_form",
        spectral_norm(&(lam0 - want)),
        1e-12,
    ));
    let lam_m1 = provider.dtn(Complex64::new(-1.0, 0.0))?;
    let eigs = boundary_pairs::numcore::eigenvalues_self_adjoint(
        &lam_m1,
        &boundary_pairs::numcore::WeightedSpace::unit(2),
    )?;
    let coth = (0.5 * l).cosh() / (0.5 * l).sinh();
    report.checks.push(Check::new(
        "gamma_norm_coth_identity",
        (1.0 / eigs[0] - coth).abs(),
        1e-12,
    ));
    report.constants.gamma_norm = Some((1.0 / eigs[0]).sqrt());

    // det Lambda(lambda) = -lambda, pole/zero cancellation in the product.
    let mut worst_det = 0.0f64;
    for lambda in [-0.4, 0.7, 2.9, 5.3] {
        let lam = provider.dtn(Complex64::new(lambda, 0.0))?;
        let det = (lam[(0, 0)] * lam[(1, 1)] - lam[(0, 1)] * lam[(1, 0)]).re;
        worst_det = worst_det.max((det + lambda).abs() / (1.0 + lambda.abs()));
    }
    report
        .checks
        .push(Check::new("determinant_is_minus_z", worst_det, 1e-10));

    // Solution operator: boundary interpolation and the ODE residual under
    // a five-point second difference.
    let z = if common.z.is_empty() {
        Complex64::new(2.3, 0.6)
    } else {
        common.z[0]
    };
    let phi = (Complex64::new(1.0, -0.3), Complex64::new(0.4, 0.8));
    let h0 = boundary_pairs::analytic::interval_solution_delta(l, z, phi, 0.0, common.delta)?;
    let h1 = boundary_pairs::analytic::interval_solution_delta(l, z, phi, l, common.delta)?;
    let bc = (h0 - phi.0).norm().max((h1 - phi.1).norm());
    report
        .checks
        .push(Check::new("solution_boundary_values", bc, 1e-13));
    let d = 2e-3 * l;
    let mut worst_ode = 0.0f64;
    for frac in [0.3, 0.5, 0.8] {
        let s = frac * l;
        let at = |t: f64| boundary_pairs::analytic::interval_solution_delta(l, z, phi, t, common.delta);
        let hc = at(s)?;
        let second = (-at(s - 2.0 * d)? + at(s - d)? * 16.0 - hc * 30.0 + at(s + d)? * 16.0
            - at(s + 2.0 * d)?)
            / (12.0 * d * d);
        worst_ode = worst_ode.max((second + z * hc).norm() / (1.0 + hc.norm()));
    }
    report
        .checks
        .push(Check::new("solution_ode_residual", worst_ode, 1e-8));

    monotonicity_into_report(&mut report, &provider, (-2.0, 4.0 / (l * l)));
    Ok(report)
}

fn verify_random(args: &RandomArgs) -> RunResult {
    let common = &args.common;
    if args.m > args.n || args.n == 0 || args.m == 0 {
        return Err(RunError::Input(format!(
            "need 1 <= m <= n, got n = {}, m = {}",
            args.n, args.m
        )));
    }
    let pair = samples::random_matrix_pair(args.n, args.m, common.seed).with_delta(common.delta);
    let digest = format!("random:n={},m={},seed={}", args.n, args.m, common.seed);
    let mut report = new_report(&digest);
    identity_into_report(&mut report, &pair, common);
    constants_into_report(&mut report, &pair);
    report
        .spectra
        .push(eigs_table("neumann_eigenvalues", pair.neumann_eigenvalues()));
    report
        .spectra
        .push(eigs_table("dirichlet_eigenvalues", pair.dirichlet_spectrum()));
    Ok(report)
}

fn construct_robin(args: &RobinArgs) -> RunResult {
    let common = &args.common;
    let (model, digest) = load_graph(common)?;
    let pair = graph_pair(&model)?.with_delta(common.delta);
    let a = RobinParameter::new(args.a).map_err(|e| RunError::Input(e.to_string()))?;
    let perturbed = robin(&pair, a)?;
    let mut report = new_report(&digest);
    let zs: Vec<Complex64> = if common.z.is_empty() {
        vec![Complex64::new(-1.0, 0.0)]
    } else {
        common.z.clone()
    };
    let m = pair.boundary_dim();
    let mut worst = 0.0f64;
    for &z in &zs {
        let lam_a = perturbed.dtn(z)?;
        let shifted = pair.dtn(z)? + CMatrix::identity(m, m) * Complex64::new(args.a, 0.0);
        worst = worst.max(spectral_norm(&(&lam_a - shifted)));
        report.tables.push(DtnTable::from_matrix(
            &format!("robin_dtn_a_{}", args.a),
            z,
            &lam_a,
        ));
    }
    report
        .checks
        .push(Check::new("robin_shift_identity", worst, 1e-13));
    report.spectra.push(eigs_table(
        "robin_neumann_eigenvalues",
        perturbed.neumann_eigenvalues(),
    ));
    Ok(report)
}

fn construct_glue(common: &CommonArgs) -> Result<GraphModel, RunError> {
    let (g1, _) = load_graph(common)?;
    let path2 = common
        .input2
        .as_ref()
        .ok_or_else(|| RunError::Input("--input2 is required for glue".into()))?;
    let (_, bytes) = digest_file(path2)?;
    let g2: GraphModel = parse_json(&bytes, "graph")?;
    g2.validate()
        .map_err(|e| RunError::Input(format!("schema violation: {e}")))?;
    let glued = glue_graphs(&g1, &g2)?;
    // Internal consistency before anything is written: the glued DtN is the
    // sum of the part DtNs and the coupled Krein identity holds.
    let pair = glue_neumann(&g1, &g2)?;
    let (p1, p2) = glued_parts(&g1, &g2)?;
    let z = Complex64::new(-1.0, 0.0);
    let sum = p1.dtn(z)? + p2.dtn(z)?;
    let direct = pair.dtn(z)?;
    if spectral_norm(&(sum - direct)) > 1e-12 {
        return Err(RunError::Input("glued DtN additivity check failed".into()));
    }
    if coupled_krein_residual(&g1, &g2, Complex64::new(-1.0, 0.4))? > 1e-10 {
        return Err(RunError::Input("coupled Krein check failed".into()));
    }
    Ok(glued)
}

fn construct_sum(common: &CommonArgs) -> Result<GraphModel, RunError> {
    let (g1, _) = load_graph(common)?;
    let path2 = common
        .input2
        .as_ref()
        .ok_or_else(|| RunError::Input("--input2 is required for sum".into()))?;
    let (_, bytes) = digest_file(path2)?;
    let g2: GraphModel = parse_json(&bytes, "graph")?;
    g2.validate()
        .map_err(|e| RunError::Input(format!("schema violation: {e}")))?;
    // Disjoint union: second side gets a suffix when ids collide.
    let collide: std::collections::HashSet<&str> =
        g1.vertices.iter().map(|v| v.id.as_str()).collect();
    let rename = |id: &str| -> String {
        if collide.contains(id) {
            format!("{id}#2")
        } else {
            id.to_string()
        }
    };
    let mut vertices = g1.vertices.clone();
    vertices.extend(g2.vertices.iter().map(|v| boundary_pairs::graph::Vertex {
        id: rename(&v.id),
        mu: v.mu,
    }));
    let mut edges = g1.edges.clone();
    edges.extend(g2.edges.iter().map(|e| boundary_pairs::graph::Edge {
        a: rename(&e.a),
        b: rename(&e.b),
        rho: e.rho,
    }));
    let mut boundary = g1.boundary.clone();
    boundary.extend(g2.boundary.iter().map(|b| rename(b)));
    let summed = GraphModel {
        vertices,
        edges,
        boundary,
    };
    summed
        .validate()
        .map_err(|e| RunError::Input(format!("summed model invalid: {e}")))?;
    Ok(summed)
}

fn construct_dcouple(common: &CommonArgs) -> RunResult {
    let (g1, digest1) = load_graph(common)?;
    let path2 = common
        .input2
        .as_ref()
        .ok_or_else(|| RunError::Input("--input2 is required for dcouple".into()))?;
    let (digest2, bytes) = digest_file(path2)?;
    let g2: GraphModel = parse_json(&bytes, "graph")?;
    g2.validate()
        .map_err(|e| RunError::Input(format!("schema violation: {e}")))?;
    let p1 = graph_pair(&g1)?.with_delta(common.delta);
    let p2 = graph_pair(&g2)?.with_delta(common.delta);
    let coupled = dirichlet_coupled_pair(&p1, &p2)?;
    let mut report = new_report(&format!("{digest1}+{digest2}"));
    let zs: Vec<Complex64> = if common.z.is_empty() {
        vec![Complex64::new(-1.0, 0.0)]
    } else {
        common.z.clone()
    };
    let m = p1.boundary_dim();
    let id = CMatrix::identity(m, m);
    let mut worst = 0.0f64;
    for &z in &zs {
        let sum_inv = solve(&p1.dtn(z)?, &id)? + solve(&p2.dtn(z)?, &id)?;
        let from_law = solve(&sum_inv, &id)?;
        let direct = coupled.dtn(z)?;
        worst = worst.max(spectral_norm(&(&from_law - &direct)));
        report
            .tables
            .push(DtnTable::from_matrix("dirichlet_coupled_dtn", z, &from_law));
    }
    report
        .checks
        .push(Check::new("ntd_sum_law_vs_direct", worst, 1e-11));
    report.spectra.push(eigs_table(
        "coupled_neumann_eigenvalues",
        coupled.neumann_eigenvalues(),
    ));
    Ok(report)
}

fn construct_boundedmod(common: &CommonArgs) -> RunResult {
    let (model, digest) = load_graph(common)?;
    let pair = graph_pair(&model)?.with_delta(common.delta);
    let bm = bounded_modification(&pair)?;
    let mut report = new_report(&digest);
    let m = pair.boundary_dim();
    let at_m1 = bm.dtn(Complex64::new(-1.0, 0.0))?;
    report.checks.push(Check::new(
        "bounded_mod_identity_at_minus_one",
        spectral_norm(&(at_m1 - CMatrix::identity(m, m))),
        1e-12,
    ));
    let zs: Vec<Complex64> = if common.z.is_empty() {
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5)]
    } else {
        common.z.clone()
    };
    let mut bound_margin = 0.0f64;
    for &z in &zs {
        if pair.dist_to_dirichlet(z) < pair.delta() {
            continue;
        }
        let tilde = bm.dtn(z)?;
        let norm = bm.dtn_half_norm(z)?;
        let bound = bm.norm_bound(z)?;
        bound_margin = bound_margin.max(norm - bound);
        report
            .tables
            .push(DtnTable::from_matrix("bounded_mod_dtn", z, &tilde));
        report.constants.l_samples.push((z.re, z.im, bound));
    }
    report
        .checks
        .push(Check::new("bounded_mod_norm_within_l", bound_margin, 1e-10));
    Ok(report)
}
