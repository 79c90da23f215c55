//! Command-line front end.
//!
//! Every run prints one JSON report to stdout and exits with
//! 0 (certified or computed), 1 (certification failed), 2 (input, format or
//! domain error) or 3 (numerical non-convergence).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::certify::{self, ComplexMatrix, ContractionCertificate};
use crate::cone::{self, ComplexVector};
use crate::error::{Error, Result};
use crate::kernel::{self, GAP_SLACK};
use crate::report::{self, Obj, Value};
use crate::spectral::{self, ORACLE_MAX_DIM};
use crate::{io, variational, DEFAULT_TOL};

pub const DEFAULT_SEED: u64 = 0x5eed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cone-gap",
    version,
    about = "Cone-contraction spectral-gap certificates for complex matrices"
)]
pub struct Cli {
    /// Seed for randomized subroutines.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Worker threads for block enumeration.
    #[arg(long, global = true, env = "CONE_GAP_THREADS")]
    pub threads: Option<usize>,

    /// Tolerance of the strict inequalities, relative to the block scale.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct EigenOpts {
    /// Target projective distance to the eigenvector.
    #[arg(long, default_value_t = 1e-12)]
    pub eig_tol: f64,

    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,

    /// Power iterations on the deflated matrix.
    #[arg(long, default_value_t = 200)]
    pub deflation_iters: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contraction certificate of a matrix.
    Certify {
        matrix: PathBuf,
        /// Test this many random blocks instead of all (non-certifying).
        #[arg(long, value_name = "N")]
        sample: Option<usize>,
    },
    /// Certificate, leading eigen-triple and observed spectral gap.
    Gap {
        matrix: PathBuf,
        /// Compare against a dense eigenvalue solver (n ≤ 16).
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        eigen: EigenOpts,
    },
    /// Variational bounds on the leading eigenvalue modulus.
    Bounds {
        matrix: PathBuf,
        /// Vector set file holding the test vector.
        #[arg(long, conflicts_with_all = ["basis", "ones"])]
        vector: Option<PathBuf>,
        /// Index of the test vector within the vector set.
        #[arg(long, default_value_t = 0, requires = "vector")]
        index: usize,
        /// Use every canonical basis vector.
        #[arg(long, conflicts_with = "ones")]
        basis: bool,
        /// Use the all-ones vector (default).
        #[arg(long)]
        ones: bool,
        /// Iterate the bounds along the power orbit.
        #[arg(long, value_name = "K")]
        refine: Option<usize>,
    },
    /// Projective distance between two stored vectors.
    Metric {
        vectors: PathBuf,
        i: usize,
        j: usize,
    },
    /// Certificate and spectral gap of a sampled kernel.
    Kernel {
        grid: PathBuf,
        #[arg(long, value_name = "N")]
        sample: Option<usize>,
        #[command(flatten)]
        eigen: EigenOpts,
    },
    /// Per-factor certificates and the spectral-gap bound of the product.
    Product {
        #[arg(required = true, num_args = 1..)]
        matrices: Vec<PathBuf>,
        /// Compare against the dense spectrum of the product (n ≤ 16).
        #[arg(long)]
        verify: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Certify { .. } => "certify",
            Command::Gap { .. } => "gap",
            Command::Bounds { .. } => "bounds",
            Command::Metric { .. } => "metric",
            Command::Kernel { .. } => "kernel",
            Command::Product { .. } => "product",
        }
    }
}

/// Exit code and rendered report of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    /// Diagnostic for stderr, if any.
    pub message: Option<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStrict(_) => EXIT_NOT_CERTIFIED,
        Error::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        Error::Input(_)
        | Error::NonFinite(_)
        | Error::Domain(_)
        | Error::Dimension(_)
        | Error::Index(_) => EXIT_INPUT,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::NonFinite(_) => "non_finite",
        Error::Domain(_) => "domain",
        Error::Dimension(_) => "dimension",
        Error::Index(_) => "index",
        Error::NotStrict(_) => "not_strict",
        Error::NoConvergence(_) => "no_convergence",
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    report: Obj,
    inputs: Vec<Value>,
}

impl Ctx<'_> {
    fn digest(&mut self, path: &Path) -> Result<()> {
        let bytes =
            std::fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let hash = Sha256::digest(&bytes);
        let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(
            Obj::new()
                .set("path", path.display().to_string())
                .set("sha256", hex)
                .into(),
        );
        Ok(())
    }

    fn matrix(&mut self, path: &Path) -> Result<ComplexMatrix> {
        self.digest(path)?;
        io::parse_matrix(path)
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.report.insert(key, v);
    }
}

fn status_for(cert: &ContractionCertificate) -> (i32, &'static str) {
    match (cert.is_strict(), cert.exhaustive) {
        (true, true) => (EXIT_OK, "certified"),
        (true, false) => (EXIT_OK, "no_violation_sampled"),
        (false, _) => (EXIT_NOT_CERTIFIED, "not_certified"),
    }
}

fn square(a: &ComplexMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "{}×{} matrix is not square",
            a.rows(),
            a.cols()
        )))
    }
}

fn oracle_report(spectrum: &[crate::Complex]) -> Value {
    Obj::new()
        .set(
            "eigenvalues",
            spectrum.iter().map(|&z| Value::from(z)).collect::<Vec<_>>(),
        )
        .set("modulus_ratio", spectral::modulus_ratio(spectrum))
        .into()
}

fn run_certify(ctx: &mut Ctx, matrix: &Path, sample: Option<usize>) -> Result<i32> {
    let a = ctx.matrix(matrix)?;
    let cert = match sample {
        Some(n) => certify::certify_matrix_sampled(&a, ctx.cli.tol, n, ctx.cli.seed)?,
        None => certify::certify_matrix(&a, ctx.cli.tol)?,
    };
    let (code, status) = status_for(&cert);
    ctx.set("certificate", report::certificate(&cert));
    ctx.set("status", status);
    Ok(code)
}

fn run_gap(ctx: &mut Ctx, matrix: &Path, verify: bool, opts: &EigenOpts) -> Result<i32> {
    let a = ctx.matrix(matrix)?;
    square(&a)?;
    let cert = certify::certify_matrix(&a, ctx.cli.tol)?;
    ctx.set("certificate", report::certificate(&cert));
    if !cert.is_strict() {
        ctx.set("status", "not_certified");
        return Ok(EXIT_NOT_CERTIFIED);
    }
    let eta = cert.rate()?;
    let triple = spectral::power_eigen(&a, &cert, opts.eig_tol, opts.max_iter)?;
    ctx.set("eigen", report::eigen(&triple));
    if !triple.converged {
        ctx.set("status", "no_convergence");
        return Ok(EXIT_NO_CONVERGENCE);
    }
    let gap = spectral::observed_gap(&a, &triple, opts.deflation_iters, ctx.cli.seed)?;
    ctx.set("observed_gap", gap);
    ctx.set("gap_bound_holds", gap <= eta + GAP_SLACK);
    if verify {
        if a.rows() <= ORACLE_MAX_DIM {
            let spectrum = spectral::dense_spectrum_oracle(&a)?;
            let mut o = oracle_report(&spectrum);
            if let Value::Obj(m) = &mut o {
                m.insert(
                    "lambda_error".into(),
                    Value::Num((spectrum[0] - triple.lambda).norm()),
                );
            }
            ctx.set("oracle", o);
        } else {
            ctx.set("oracle", format!("skipped: n > {ORACLE_MAX_DIM}"));
        }
    }
    ctx.set("status", "computed");
    Ok(EXIT_OK)
}

fn run_bounds(
    ctx: &mut Ctx,
    matrix: &Path,
    vector: Option<&Path>,
    index: usize,
    basis: bool,
    refine: Option<usize>,
) -> Result<i32> {
    let a = ctx.matrix(matrix)?;
    square(&a)?;
    let cert = certify::certify_matrix(&a, ctx.cli.tol)?;
    ctx.set("certificate", report::certificate(&cert));
    if cert.class == certify::CertificateClass::Fail {
        ctx.set("status", "not_certified");
        return Ok(EXIT_NOT_CERTIFIED);
    }
    ctx.set("upper_certified", cert.is_strict());

    let n = a.rows();
    let tests: Vec<ComplexVector> = if let Some(path) = vector {
        ctx.digest(path)?;
        let vs = io::parse_vectors(path)?;
        let v = vs
            .get(index)
            .ok_or_else(|| Error::Index(format!("vector {index} of {}", vs.len())))?;
        vec![v.clone()]
    } else if basis {
        ctx.set("basis_lower_bound", variational::basis_lower_bound(&a)?);
        (0..n)
            .map(|i| ComplexVector::basis(n, i))
            .collect::<Result<_>>()?
    } else {
        vec![ComplexVector::ones(n)]
    };
    let bounds = tests
        .iter()
        .map(|x| variational::bounds_at(&a, x).map(|b| report::bounds(&b)))
        .collect::<Result<Vec<_>>>()?;
    ctx.set("bounds", bounds);

    if let Some(k) = refine {
        let seq = variational::refine_bounds(&a, &cert, k)?;
        let rows: Vec<Value> = seq
            .iter()
            .map(|b| Value::from(vec![b.lower, b.upper]))
            .collect();
        ctx.set("refinement", rows);
        if let Some(last) = seq.last() {
            ctx.set("refined", report::bounds(last));
        }
    }
    ctx.set("status", "computed");
    Ok(EXIT_OK)
}

fn run_metric(ctx: &mut Ctx, path: &Path, i: usize, j: usize) -> Result<i32> {
    ctx.digest(path)?;
    let vs = io::parse_vectors(path)?;
    let get = |k: usize| {
        vs.get(k)
            .ok_or_else(|| Error::Index(format!("vector {k} of {}", vs.len())))
    };
    let d = cone::distance(get(i)?, get(j)?)?;
    ctx.set("pair", vec![i, j]);
    ctx.set("metric", report::distance(&d));
    ctx.set("status", "computed");
    Ok(EXIT_OK)
}

fn run_kernel(ctx: &mut Ctx, path: &Path, sample: Option<usize>, opts: &EigenOpts) -> Result<i32> {
    ctx.digest(path)?;
    let grid = io::parse_kernel(path)?;
    ctx.set("nodes", grid.len());
    if let Some(n) = sample {
        let cert = kernel::kernel_theta_sampled(&grid, ctx.cli.tol, n, ctx.cli.seed)?;
        let (code, status) = status_for(&cert);
        ctx.set("certificate", report::certificate(&cert));
        ctx.set("status", status);
        return Ok(code);
    }
    let cert = kernel::kernel_theta(&grid, ctx.cli.tol)?;
    ctx.set("certificate", report::certificate(&cert));
    if !cert.is_strict() {
        ctx.set("status", "not_certified");
        return Ok(EXIT_NOT_CERTIFIED);
    }
    let kc = kernel::kernel_certify(
        &grid,
        ctx.cli.tol,
        opts.eig_tol,
        opts.max_iter,
        opts.deflation_iters,
        ctx.cli.seed,
    )?;
    ctx.set("eigen", report::eigen(&kc.triple));
    ctx.set("observed_gap", kc.observed_gap);
    ctx.set("gap_bound_holds", kc.gap_bound_holds);
    ctx.set("status", "computed");
    Ok(EXIT_OK)
}

fn run_product(ctx: &mut Ctx, paths: &[PathBuf], verify: bool) -> Result<i32> {
    let mats = paths
        .iter()
        .map(|p| ctx.matrix(p))
        .collect::<Result<Vec<_>>>()?;
    let n = mats[0].rows();
    if let Some(k) = mats.iter().position(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::Dimension(format!(
            "factor {k} is {}×{}, expected {n}×{n}",
            mats[k].rows(),
            mats[k].cols()
        )));
    }
    let certs = mats
        .iter()
        .map(|m| certify::certify_matrix(m, ctx.cli.tol))
        .collect::<Result<Vec<_>>>()?;
    ctx.set(
        "certificates",
        certs.iter().map(report::certificate).collect::<Vec<_>>(),
    );
    if !certs.iter().all(ContractionCertificate::is_strict) {
        ctx.set("status", "not_certified");
        return Ok(EXIT_NOT_CERTIFIED);
    }
    let bound = certify::product_gap_bound(&certs)?;
    ctx.set("product_bound", bound);
    if verify {
        if n <= ORACLE_MAX_DIM {
            let product = mats[1..]
                .iter()
                .try_fold(mats[0].clone(), |acc, m| acc.matmul(m))?;
            let spectrum = spectral::dense_spectrum_oracle(&product)?;
            ctx.set(
                "gap_bound_holds",
                spectral::modulus_ratio(&spectrum) <= bound + GAP_SLACK,
            );
            ctx.set("oracle", oracle_report(&spectrum));
        } else {
            ctx.set("oracle", format!("skipped: n > {ORACLE_MAX_DIM}"));
        }
    }
    ctx.set("status", "certified");
    Ok(EXIT_OK)
}

fn dispatch(ctx: &mut Ctx) -> Result<i32> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Certify { matrix, sample } => run_certify(ctx, matrix, *sample),
        Command::Gap {
            matrix,
            verify,
            eigen,
        } => run_gap(ctx, matrix, *verify, eigen),
        Command::Bounds {
            matrix,
            vector,
            index,
            basis,
            refine,
            ..
        } => run_bounds(ctx, matrix, vector.as_deref(), *index, *basis, *refine),
        Command::Metric { vectors, i, j } => run_metric(ctx, vectors, *i, *j),
        Command::Kernel {
            grid,
            sample,
            eigen,
        } => run_kernel(ctx, grid, *sample, eigen),
        Command::Product { matrices, verify } => run_product(ctx, matrices, *verify),
    }
}

fn run_inner(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut ctx = Ctx {
        cli,
        report: Obj::new(),
        inputs: Vec::new(),
    };
    ctx.set("command", cli.command.name());
    ctx.set("seed", Value::Int(cli.seed as i64));
    ctx.set("tol", cli.tol);
    let (code, message) = match dispatch(&mut ctx) {
        Ok(code) => (code, None),
        Err(e) => {
            let code = exit_code(&e);
            ctx.set(
                "status",
                if code == EXIT_NOT_CERTIFIED {
                    "not_certified"
                } else {
                    "error"
                },
            );
            ctx.set(
                "error",
                Obj::new()
                    .set("kind", error_kind(&e))
                    .set("message", e.to_string()),
            );
            (code, Some(e.to_string()))
        }
    };
    let inputs = std::mem::take(&mut ctx.inputs);
    ctx.set("inputs", Value::Arr(inputs));
    ctx.set("exit_code", code);
    if cli.timings {
        ctx.set(
            "timings",
            Obj::new().set("total_seconds", start.elapsed().as_secs_f64()),
        );
    }
    Outcome {
        code,
        report: Value::from(ctx.report).render(),
        message,
    }
}

/// Runs one command on a dedicated thread pool when `--threads` is given.
pub fn run(cli: &Cli) -> Outcome {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Outcome {
            code: EXIT_INPUT,
            report: Value::from(
                Obj::new()
                    .set("status", "error")
                    .set("exit_code", EXIT_INPUT)
                    .set(
                        "error",
                        Obj::new()
                            .set("kind", "input")
                            .set("message", "--tol must be finite and nonnegative"),
                    ),
            )
            .render(),
            message: Some("--tol must be finite and nonnegative".into()),
        };
    }
    match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run_inner(cli)),
            Err(e) => Outcome {
                code: EXIT_INPUT,
                report: Value::from(
                    Obj::new()
                        .set("status", "error")
                        .set("exit_code", EXIT_INPUT)
                        .set(
                            "error",
                            Obj::new()
                                .set("kind", "input")
                                .set("message", e.to_string()),
                        ),
                )
                .render(),
                message: Some(e.to_string()),
            },
        },
        None => run_inner(cli),
    }
}

/// Parses `args`, runs, prints the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out = run(&cli);
    if let Some(msg) = &out.message {
        eprintln!("cone-gap: {msg}");
    }
    print!("{}", out.report);
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &out.report) {
            eprintln!("cone-gap: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    out.code
}
