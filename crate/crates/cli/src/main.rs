//! `sparkforge`: exact full-spark certification of dihedral-group frames,
//! vector construction, numeric spark checks, erasure reconstruction, and
//! the lemma-level property suite.
//!
//! Exit codes: 0 success/certified, 1 mathematical refutation or
//! reconstruction failure, 2 usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use sparkforge_core::certifier::{
    certify_at_lambda, certify_full_spark_symbolic, run_lemma_suite, CertificateReport,
    CheckStatus, LemmaSuiteReport, SubsetIndex,
};
use sparkforge_core::exactfield::{parse_rational, CycloElement};
use sparkforge_core::exec::default_workers;
use sparkforge_core::frames::{
    construct_w_exact, genericity_experiment, rational_to_f64, FrameEnsemble, SparkReport,
    DEFAULT_TOL,
};
use sparkforge_core::grouprep::{orbit_matrix_numeric, OrbitGroup};
use sparkforge_core::wire;

#[derive(Parser)]
#[command(name = "sparkforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupChoice {
    /// Dihedral orbit of 2n shifts and reflected shifts.
    Dihedral,
    /// Heisenberg orbit of n^2 time-frequency shifts.
    Heisenberg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the full-spark property of the dihedral orbit, exactly.
    ///
    /// Without --lambda this certifies the whole symbolic family (every
    /// n x n subset determinant nonzero as a polynomial); with --lambda it
    /// proves the property for the concrete vector built at that rational
    /// point.
    Certify {
        /// Dimension n (>= 3).
        #[arg(long)]
        n: usize,
        /// Rational evaluation point "p/q".
        #[arg(long)]
        lambda: Option<String>,
        /// Worker threads for the subset sweep.
        #[arg(long, env = "SPARKFORGE_WORKERS")]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the seed vector w at a rational lambda.
    Construct {
        /// Dimension n (>= 3).
        #[arg(long)]
        n: usize,
        /// Rational parameter "p/q".
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric spark check of a vector's group orbit.
    Spark {
        /// JSON file holding the vector as [re, im] pairs.
        #[arg(long)]
        input: PathBuf,
        /// Expected dimension; rejected if the input length differs.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "dihedral")]
        group: GroupChoice,
        /// Relative singular-value threshold.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Maximum number of subsets to enumerate.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long, env = "SPARKFORGE_WORKERS")]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reconstruct a vector from a kept subset of frame coefficients.
    Reconstruct {
        /// JSON file holding either a seed vector (its orbit becomes the
        /// frame) or a frame object {"n": .., "vectors": [..]}.
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_enum, default_value = "dihedral")]
        group: GroupChoice,
        /// Kept coefficient indices, comma-separated.
        #[arg(long)]
        keep: String,
        /// JSON file with the kept coefficients as [re, im] pairs.
        #[arg(long)]
        coeffs: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the lemma-level property checks at order n.
    Lemmas {
        /// Dimension n (>= 3).
        #[arg(long)]
        n: usize,
        #[arg(long, env = "SPARKFORGE_WORKERS")]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded Monte-Carlo estimate of how often a random orbit is full
    /// spark.
    Genericity {
        /// Dimension n (>= 3).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Certify { n, lambda, workers, output } => {
            check_dimension(n)?;
            let workers = workers.unwrap_or_else(default_workers).max(1);
            let report = match lambda {
                Some(text) => {
                    let lambda = parse_lambda(&text)?;
                    certify_at_lambda(n, &lambda, workers)
                }
                None => certify_full_spark_symbolic(n, workers),
            };
            emit(&output, &report, render_certificate(&report))?;
            Ok(exit_flag(report.certified))
        }
        Command::Construct { n, lambda, output } => {
            check_dimension(n)?;
            let lambda = parse_lambda(&lambda)?;
            let exact = construct_w_exact(n, &lambda);
            let numeric: Vec<Complex64> = exact.iter().map(CycloElement::to_complex).collect();
            let report = ConstructReport {
                n,
                lambda: format!("{}/{}", lambda.numer(), lambda.denom()),
                lambda_float: rational_to_f64(&lambda),
                vector: numeric,
                exact,
            };
            let text = render_vector(&report.vector);
            emit(&output, &report, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Spark { input, n, group, tol, cap, workers, output } => {
            if tol <= 0.0 {
                return Err("tolerance must be positive".to_string());
            }
            let vector = read_vector(&input)?;
            if let Some(expected) = n {
                if vector.len() != expected {
                    return Err(format!(
                        "input vector has length {} but --n {expected} was given",
                        vector.len()
                    ));
                }
            }
            let dim = vector.len();
            check_dimension(dim)?;
            let workers = workers.unwrap_or_else(default_workers).max(1);
            let frame = orbit_frame(dim, &vector, group)?;
            let report = frame
                .numeric_spark_check(tol, cap, workers)
                .map_err(|e| e.to_string())?;
            emit(&output, &report, render_spark(&report))?;
            Ok(exit_flag(report.full_spark))
        }
        Command::Reconstruct { frame, group, keep, coeffs, output } => {
            let ensemble = read_frame(&frame, group)?;
            let kept = parse_keep(&keep, ensemble.size())?;
            let coeffs = read_vector(&coeffs)?;
            let result = ensemble
                .reconstruct_from_subset(&kept, &coeffs)
                .map_err(|e| e.to_string())?;
            let text = render_reconstruction(&result);
            let ok = result.succeeded();
            emit(&output, &result, text)?;
            Ok(exit_flag(ok))
        }
        Command::Lemmas { n, workers, output } => {
            check_dimension(n)?;
            let workers = workers.unwrap_or_else(default_workers).max(1);
            let report = run_lemma_suite(n, workers);
            emit(&output, &report, render_lemmas(&report))?;
            Ok(exit_flag(report.all_pass))
        }
        Command::Genericity { n, trials, seed, tol, output } => {
            check_dimension(n)?;
            if tol <= 0.0 {
                return Err("tolerance must be positive".to_string());
            }
            let report = genericity_experiment(n, trials, seed, tol);
            let text = format!(
                "genericity n={} trials={} passes={} fraction={}\n",
                report.n, report.trials, report.passes, report.pass_fraction
            );
            emit(&output, &report, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn check_dimension(n: usize) -> Result<(), String> {
    if n < 3 {
        return Err(format!("dimension n must be at least 3, got {n}"));
    }
    Ok(())
}

fn parse_lambda(text: &str) -> Result<BigRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn exit_flag(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[derive(Serialize)]
struct ConstructReport {
    n: usize,
    lambda: String,
    lambda_float: f64,
    #[serde(with = "wire::complex_vec")]
    vector: Vec<Complex64>,
    exact: Vec<CycloElement>,
}

fn orbit_frame(
    n: usize,
    vector: &[Complex64],
    group: GroupChoice,
) -> Result<FrameEnsemble, String> {
    let orbit_group = match group {
        GroupChoice::Dihedral => OrbitGroup::DihedralTime,
        GroupChoice::Heisenberg => OrbitGroup::Heisenberg,
    };
    let orbit = orbit_matrix_numeric(n, vector, orbit_group).map_err(|e| e.to_string())?;
    Ok(FrameEnsemble::from_orbit(&orbit))
}

fn read_vector(path: &PathBuf) -> Result<Vec<Complex64>, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| format!("{} is not a [re, im] pair array: {e}", path.display()))?;
    Ok(wire::vector_from_pairs(&pairs))
}

fn read_frame(path: &PathBuf, group: GroupChoice) -> Result<FrameEnsemble, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| format!("{} is not JSON: {e}", path.display()))?;
    if value.is_array() {
        let pairs: Vec<[f64; 2]> = serde_json::from_value(value)
            .map_err(|e| format!("{} is not a [re, im] pair array: {e}", path.display()))?;
        let vector = wire::vector_from_pairs(&pairs);
        let n = vector.len();
        check_dimension(n)?;
        return orbit_frame(n, &vector, group);
    }
    serde_json::from_value(value)
        .map_err(|e| format!("{} is not a frame object: {e}", path.display()))
}

fn parse_keep(text: &str, frame_size: usize) -> Result<SubsetIndex, String> {
    let mut indices = Vec::new();
    for part in text.split(',') {
        let index: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("bad kept index `{part}`"))?;
        if index >= frame_size {
            return Err(format!("kept index {index} out of range for frame size {frame_size}"));
        }
        indices.push(index);
    }
    indices.sort_unstable();
    indices.dedup();
    Ok(SubsetIndex::new(indices))
}

fn emit<T: Serialize>(output: &OutputArgs, report: &T, text: String) -> Result<(), String> {
    let rendered = match output.format {
        ReportFormat::Json => {
            let mut json =
                serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
            json.push('\n');
            json
        }
        ReportFormat::Text => text,
    };
    match &output.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn render_certificate(report: &CertificateReport) -> String {
    let mut out = format!(
        "certify n={} group={} subsets={} certified={}{}\n",
        report.n,
        report.group,
        report.total,
        report.certified,
        report
            .lambda
            .as_deref()
            .map(|l| format!(" lambda={l}"))
            .unwrap_or_default(),
    );
    for witness in &report.witnesses {
        out.push_str(&format!(
            "witness {}\n",
            witness
                .indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
    }
    out
}

fn render_vector(vector: &[Complex64]) -> String {
    let mut out = String::new();
    for z in vector {
        out.push_str(&format!("{} {}\n", z.re, z.im));
    }
    out
}

fn render_spark(report: &SparkReport) -> String {
    let mut out = format!(
        "spark n={} frame_size={} subsets={} tol={} full_spark={}\n",
        report.n, report.frame_size, report.total_subsets, report.tol, report.full_spark
    );
    for violation in &report.violations {
        out.push_str(&format!(
            "violation {} min_singular={}\n",
            violation
                .indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
            violation.min_singular
        ));
    }
    out
}

fn render_reconstruction(result: &sparkforge_core::frames::ReconstructionResult) -> String {
    match (&result.recovered, result.residual) {
        (Some(recovered), Some(residual)) => {
            let mut out = format!(
                "reconstruct kept={} condition={} residual={residual}\n",
                result.kept.len(),
                result.condition
            );
            out.push_str(&render_vector(recovered));
            out
        }
        _ => format!(
            "reconstruct failed: kept subset is numerically singular (condition={})\n",
            result.condition
        ),
    }
}

fn render_lemmas(report: &LemmaSuiteReport) -> String {
    let mut out = format!("lemmas n={} all_pass={}\n", report.n, report.all_pass);
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skipped",
        };
        out.push_str(&format!("{:<22} {:<8} {}\n", check.name, status, check.details));
    }
    out
}
