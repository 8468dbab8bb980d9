//! Command-line front end: `snf`, `pattern`, `generators`, `fft`, `bench`,
//! `dirichlet`, `wavedec` and `demo boxspline`.
//!
//! Every run is reproducible from the flags plus `--seed`; outputs are
//! written atomically and a machine-readable summary (inputs/outputs with
//! SHA-256, timings, metrics) can be emitted with `--summary`. Thread count
//! and the dense-oracle limit honor the `PATTERN_FFT_THREADS` and
//! `PATTERN_FFT_DENSE_LIMIT` environment variables unless overridden on the
//! command line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error as ThisError;

use crate::dirichlet;
use crate::error::Error;
use crate::fft::{
    dft_naive, fft_pattern_with, ifft_pattern_with, Domain, Execution, FourierPlan, LatticeArray,
    DEFAULT_DENSE_LIMIT,
};
use crate::intlinalg::{inverse_rational, smith_normal_form, IntMatrix};
use crate::io;
use crate::lattice::{PatternBasis, Window};
use crate::wavelet::{self, FilterBank, WaveletCoefficients};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parsed invocation; every run is a pure function of this plus the seed.
#[derive(Debug, Parser)]
#[command(
    name = "pattern-fft",
    about = "Fourier and periodic wavelet transforms on integer-matrix sampling patterns",
    version
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Window of congruence-class representatives.
    #[arg(long, global = true, value_enum, default_value_t = WindowArg::Unit)]
    pub window: WindowArg,
    /// Dense-oracle size guard (env: PATTERN_FFT_DENSE_LIMIT).
    #[arg(long, global = true)]
    pub dense_limit: Option<usize>,
    /// Worker threads for the parallel partitions (env: PATTERN_FFT_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a JSON run summary here.
    #[arg(long, global = true)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    /// [0,1)^d
    Unit,
    /// [-1/2,1/2)^d
    Centered,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Unit => Window::ZeroOne,
            WindowArg::Centered => Window::Centered,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Smith normal form M = Q·E·R.
    Snf {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Dump the pattern points in λ-order as CSV.
    Pattern {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump the generating group 𝒢(Mᵀ) in μ-order as CSV.
    Generators {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Transform a coefficient array on 𝒫(M).
    Fft {
        #[arg(long)]
        matrix: PathBuf,
        /// CSV of m complex values (re,im) in λ-order.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
        /// Force the dense-matrix path.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time the serial vs parallel transform on pattern normal forms.
    Bench(BenchArgs),
    /// Emit the Dirichlet kernel spectra and a filter bank for M = J·N.
    Dirichlet {
        #[arg(long)]
        matrix: PathBuf,
        /// x, y, d or a matrix file.
        #[arg(long, default_value = "x")]
        factor_j: String,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Wavelet decomposition (repeat --factor-j for more levels).
    Wavedec {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, required = true)]
        factor_j: Vec<String>,
        /// "dirichlet" or a filter-bank JSON file (single level).
        #[arg(long, default_value = "dirichlet")]
        filters: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Demonstration pipelines.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Number of pattern points (a power of two).
    #[arg(long)]
    pub m: u64,
    /// Normal-form parameter i (0 = diagonal); sweeps the divisors of k
    /// when omitted.
    #[arg(long)]
    pub shape: Option<u64>,
    /// Repetitions per measurement.
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// Sample a centered box spline, decompose it, render the branches.
    Boxspline {
        /// xi (piecewise linear) or psi (piecewise cubic).
        #[arg(long, default_value = "xi")]
        which: String,
        #[arg(long)]
        matrix: PathBuf,
        /// x, y, d or a matrix file.
        #[arg(long, default_value = "x")]
        j: String,
        #[arg(long)]
        output_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable record of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub timings_seconds: BTreeMap<String, f64>,
    pub metrics: BTreeMap<String, f64>,
}

impl RunSummary {
    fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings_seconds: BTreeMap::new(),
            metrics: BTreeMap::new(),
        }
    }

    /// Reads an input exactly once, recording its digest.
    fn read_input(&mut self, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = std::fs::read(path)?;
        self.inputs.push(digest_bytes(path, &bytes));
        Ok(bytes)
    }

    fn read_input_text(&mut self, path: &Path) -> CliResult<String> {
        let bytes = self.read_input(path)?;
        String::from_utf8(bytes)
            .map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))
    }

    fn read_matrix(&mut self, path: &Path) -> CliResult<IntMatrix> {
        let text = self.read_input_text(path)?;
        Ok(IntMatrix::parse(&text)?)
    }

    fn write_output(&mut self, path: &Path, bytes: &[u8]) -> CliResult<()> {
        io::write_atomic(path, bytes)?;
        self.outputs.push(digest(path)?);
        Ok(())
    }
}

fn digest(path: &Path) -> CliResult<FileDigest> {
    let bytes = std::fs::read(path)?;
    Ok(digest_bytes(path, &bytes))
}

fn digest_bytes(path: &Path, bytes: &[u8]) -> FileDigest {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    FileDigest {
        path: path.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
    }
}

/// The matrix of the planar pattern normal form: rows `(l, i)` and `(0, k)`.
pub fn normal_form_matrix(l: u64, i: u64, k: u64) -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[l as i64, i as i64], &[0, k as i64]])
}

/// Named dyadic factors: the axis splits and the quincunx rotation.
pub fn named_factor(name: &str) -> Option<IntMatrix> {
    match name {
        "x" => Some(IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])),
        "y" => Some(IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]])),
        "d" => Some(IntMatrix::from_i64_rows(&[&[1, -1], &[1, 1]])),
        _ => None,
    }
}

fn load_factor(spec: &str, summary: &mut RunSummary) -> CliResult<IntMatrix> {
    if let Some(m) = named_factor(spec) {
        return Ok(m);
    }
    summary.read_matrix(Path::new(spec))
}

fn coarse_factor(m: &IntMatrix, j: &IntMatrix) -> CliResult<IntMatrix> {
    if j.dim() != m.dim() {
        return Err(CliError::Usage(format!(
            "factor J is {}×{} but M is {}×{}",
            j.dim(),
            j.dim(),
            m.dim(),
            m.dim()
        )));
    }
    let n = inverse_rational(j)?.mul_int(m);
    if !n.is_integral() {
        return Err(CliError::Usage(format!(
            "J does not divide M: N = J⁻¹M is not integral for J = {}",
            j.to_json()
        )));
    }
    Ok(n.to_int()?)
}

fn dense_limit(config: &RunConfig) -> usize {
    config
        .dense_limit
        .or_else(|| {
            std::env::var("PATTERN_FFT_DENSE_LIMIT")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}

fn thread_count(config: &RunConfig) -> Option<usize> {
    config.threads.or_else(|| {
        std::env::var("PATTERN_FFT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Executes one invocation and returns its summary. Usage errors exit 2 via
/// clap; numerical-contract violations surface as `Err` (exit 1).
pub fn run(config: &RunConfig) -> CliResult<RunSummary> {
    let window: Window = config.window.into();
    match &config.command {
        Command::Snf { matrix } => {
            let mut summary = RunSummary::new("snf", config.seed);
            let m = summary.read_matrix(matrix)?;
            let snf = smith_normal_form(&m)?;
            let divisors: Vec<String> = snf.e.iter().map(|e| e.to_string()).collect();
            println!("E = diag({})", divisors.join(", "));
            println!("Q =\n{}", snf.q);
            println!("R =\n{}", snf.r);
            for (i, e) in snf.e.iter().enumerate() {
                summary
                    .metrics
                    .insert(format!("epsilon_{}", i + 1), e.to_string().parse().unwrap_or(f64::NAN));
            }
            finish(config, summary)
        }
        Command::Pattern { matrix, output } => {
            let mut summary = RunSummary::new("pattern", config.seed);
            let basis = PatternBasis::new(&summary.read_matrix(matrix)?)?;
            let csv = io::pattern_csv(&basis, window);
            emit(&mut summary, output.as_deref(), csv.as_bytes())?;
            finish(config, summary)
        }
        Command::Generators { matrix, output } => {
            let mut summary = RunSummary::new("generators", config.seed);
            let basis = PatternBasis::new(&summary.read_matrix(matrix)?)?;
            let csv = io::generators_csv(&basis);
            emit(&mut summary, output.as_deref(), csv.as_bytes())?;
            finish(config, summary)
        }
        Command::Fft {
            matrix,
            input,
            inverse,
            oracle,
            output,
        } => {
            let mut summary = RunSummary::new("fft", config.seed);
            let basis = Arc::new(PatternBasis::new(&summary.read_matrix(matrix)?)?);
            let text = summary.read_input_text(input)?;
            let values = io::parse_complex_csv(&text)?;
            let domain = if *inverse {
                Domain::Frequency
            } else {
                Domain::Spatial
            };
            let array = LatticeArray::new(basis.clone(), domain, values)?;
            let limit = dense_limit(config);
            let started = Instant::now();
            let result = in_pool(thread_count(config), || -> crate::error::Result<LatticeArray> {
                if *oracle {
                    if *inverse {
                        // Conjugate trick: ℱ⁻¹x = conj(ℱ(conj x)).
                        let conj = LatticeArray::new(
                            basis.clone(),
                            Domain::Spatial,
                            array.values().iter().map(|v| v.conj()).collect(),
                        )?;
                        let fwd = dft_naive(&conj, limit)?;
                        LatticeArray::new(
                            basis.clone(),
                            Domain::Spatial,
                            fwd.values().iter().map(|v| v.conj()).collect(),
                        )
                    } else {
                        dft_naive(&array, limit)
                    }
                } else {
                    let plan = FourierPlan::new(basis.clone());
                    if *inverse {
                        ifft_pattern_with(&array, &plan, Execution::Parallel)
                    } else {
                        fft_pattern_with(&array, &plan, Execution::Parallel)
                    }
                }
            })??;
            summary
                .timings_seconds
                .insert("transform".into(), started.elapsed().as_secs_f64());
            emit(
                &mut summary,
                output.as_deref(),
                io::complex_csv(result.values()).as_bytes(),
            )?;
            finish(config, summary)
        }
        Command::Bench(args) => {
            let mut summary = RunSummary::new("bench", config.seed);
            let csv = run_bench(args, config)?;
            emit(&mut summary, args.output.as_deref(), csv.as_bytes())?;
            finish(config, summary)
        }
        Command::Dirichlet {
            matrix,
            factor_j,
            output_dir,
        } => {
            let mut summary = RunSummary::new("dirichlet", config.seed);
            let m_mat = summary.read_matrix(matrix)?;
            let j_mat = load_factor(factor_j, &mut summary)?;
            let n_mat = coarse_factor(&m_mat, &j_mat)?;
            let m = Arc::new(PatternBasis::new(&m_mat)?);
            let j = Arc::new(PatternBasis::new(&j_mat)?);
            let n = Arc::new(PatternBasis::new(&n_mat)?);
            let phi = dirichlet::dirichlet_spectrum(&m);
            let psi = dirichlet::wavelet_spectrum(&m, &n, &j)?;
            let bank = dirichlet::filter_bank_from_dirichlet(&m, &n, &j)?;
            summary.write_output(
                &output_dir.join("phi_spectrum.csv"),
                io::spectrum_csv(&phi).as_bytes(),
            )?;
            summary.write_output(
                &output_dir.join("psi_spectrum.csv"),
                io::spectrum_csv(&psi).as_bytes(),
            )?;
            summary.write_output(
                &output_dir.join("filter_bank.json"),
                io::filter_bank_json(&bank).as_bytes(),
            )?;
            finish(config, summary)
        }
        Command::Wavedec {
            matrix,
            factor_j,
            filters,
            input,
            output_dir,
        } => {
            let mut summary = RunSummary::new("wavedec", config.seed);
            let m_mat = summary.read_matrix(matrix)?;
            let text = summary.read_input_text(input)?;
            let chain = build_chain(&m_mat, factor_j, filters, &mut summary)?;
            let basis = chain[0].m_basis().clone();
            let values = io::parse_complex_csv(&text)?;
            let array = LatticeArray::new(basis, Domain::Spatial, values)?;
            let started = Instant::now();
            let decomposition =
                in_pool(thread_count(config), || wavelet::multilevel(&array, &chain))??;
            summary
                .timings_seconds
                .insert("decomposition".into(), started.elapsed().as_secs_f64());
            for (level, branches) in decomposition.details.iter().enumerate() {
                for (b, branch) in branches.iter().enumerate() {
                    let name = format!("level{}_branch{}.csv", level + 1, b + 1);
                    summary.write_output(
                        &output_dir.join(name),
                        io::complex_csv(branch.values()).as_bytes(),
                    )?;
                }
            }
            summary.write_output(
                &output_dir.join("approximation.csv"),
                io::complex_csv(decomposition.approximation.values()).as_bytes(),
            )?;
            summary.metrics.insert(
                "energy_ratio".into(),
                decomposition.energy() / array.norm().powi(2).max(1e-300),
            );
            finish(config, summary)
        }
        Command::Demo(DemoCommand::Boxspline {
            which,
            matrix,
            j,
            output_dir,
        }) => {
            let mut summary = RunSummary::new("demo boxspline", config.seed);
            run_boxspline_demo(which, matrix, j, output_dir, config, &mut summary)?;
            finish(config, summary)
        }
    }
}

fn emit(summary: &mut RunSummary, output: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match output {
        Some(path) => summary.write_output(path, bytes),
        None => {
            print!("{}", String::from_utf8_lossy(bytes));
            Ok(())
        }
    }
}

fn finish(config: &RunConfig, summary: RunSummary) -> CliResult<RunSummary> {
    if let Some(path) = &config.summary {
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        io::write_atomic(path, json.as_bytes())?;
    }
    Ok(summary)
}

fn build_chain(
    m_mat: &IntMatrix,
    factors: &[String],
    filters: &str,
    summary: &mut RunSummary,
) -> CliResult<Vec<FilterBank>> {
    if filters != "dirichlet" {
        if factors.len() != 1 {
            return Err(CliError::Usage(
                "a filter-bank file applies to a single level".into(),
            ));
        }
        let text = summary.read_input_text(Path::new(filters))?;
        let bank = io::filter_bank_from_json(&text)?;
        if bank.m_basis().matrix() != m_mat {
            return Err(CliError::Usage(
                "filter-bank file was built for a different matrix".into(),
            ));
        }
        return Ok(vec![bank]);
    }
    let mut chain = Vec::with_capacity(factors.len());
    let mut current = m_mat.clone();
    for factor in factors {
        let j_mat = load_factor(factor, summary)?;
        let n_mat = coarse_factor(&current, &j_mat)?;
        let m = Arc::new(PatternBasis::new(&current)?);
        let j = Arc::new(PatternBasis::new(&j_mat)?);
        let n = Arc::new(PatternBasis::new(&n_mat)?);
        chain.push(dirichlet::filter_bank_from_dirichlet(&m, &n, &j)?);
        current = n_mat;
    }
    Ok(chain)
}

fn run_bench(args: &BenchArgs, config: &RunConfig) -> CliResult<String> {
    if !args.m.is_power_of_two() {
        return Err(CliError::Usage("bench sizes must be powers of two".into()));
    }
    let exponent = args.m.trailing_zeros();
    let k = 1u64 << exponent.div_ceil(2);
    let l = args.m / k;
    let shapes: Vec<u64> = match args.shape {
        Some(i) if i >= k => {
            return Err(CliError::Usage(format!(
                "--shape must satisfy 0 ≤ i < k = {k} for m = {}",
                args.m
            )))
        }
        Some(i) => vec![i],
        None => {
            let mut divisors: Vec<u64> = (0..=exponent / 2).map(|p| 1u64 << p).collect();
            divisors.push(0);
            divisors
        }
    };
    let threads = thread_count(config).unwrap_or_else(num_cpus_default);
    let mut out = String::from("i,cycles,serial_seconds,parallel_seconds,speedup\n");
    for &i in &shapes {
        let matrix = normal_form_matrix(l, i, k);
        let (cycles, serial, parallel) =
            bench_shape(&matrix, args.reps, config.seed, threads)?;
        let cycle_text = cycles
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("x");
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.3}\n",
            i,
            cycle_text,
            serial,
            parallel,
            serial / parallel
        ));
    }
    Ok(out)
}

fn num_cpus_default() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Mean serial and parallel transform times over `reps` runs.
pub fn bench_shape(
    matrix: &IntMatrix,
    reps: usize,
    seed: u64,
    threads: usize,
) -> CliResult<(Vec<u64>, f64, f64)> {
    let basis = Arc::new(PatternBasis::new(matrix)?);
    let plan = FourierPlan::new(basis.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<Complex64> = (0..basis.det_abs() as usize)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let array = LatticeArray::new(basis.clone(), Domain::Spatial, values)?;

    let serial = time_mean(reps, || {
        fft_pattern_with(&array, &plan, Execution::Serial).unwrap()
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let parallel = pool.install(|| {
        time_mean(reps, || {
            fft_pattern_with(&array, &plan, Execution::Parallel).unwrap()
        })
    });
    Ok((basis.cycle_lengths().to_vec(), serial, parallel))
}

fn time_mean<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    // One warm-up, then the mean of `reps` measurements.
    std::hint::black_box(f());
    let started = Instant::now();
    for _ in 0..reps.max(1) {
        std::hint::black_box(f());
    }
    started.elapsed().as_secs_f64() / reps.max(1) as f64
}

fn run_boxspline_demo(
    which: &str,
    matrix: &Path,
    j_spec: &str,
    output_dir: &Path,
    config: &RunConfig,
    summary: &mut RunSummary,
) -> CliResult<()> {
    let ds = match which {
        "xi" => crate::boxspline::DirectionSet::xi(),
        "psi" => crate::boxspline::DirectionSet::psi(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown box spline \"{other}\" (expected xi or psi)"
            )))
        }
    };
    let m_mat = summary.read_matrix(matrix)?;
    if m_mat.dim() != 2 {
        return Err(CliError::Usage(
            "the box-spline demo needs a 2×2 sampling matrix".into(),
        ));
    }
    let j_mat = load_factor(j_spec, summary)?;
    let n_mat = coarse_factor(&m_mat, &j_mat)?;
    let m = Arc::new(PatternBasis::new(&m_mat)?);
    let j = Arc::new(PatternBasis::new(&j_mat)?);
    let n = Arc::new(PatternBasis::new(&n_mat)?);

    let threads = thread_count(config);
    in_pool(threads, || -> CliResult<()> {
        // Samples on the centered window, as in the figure pipeline.
        let samples = crate::boxspline::sample_on_pattern(&ds, &m, Window::Centered);
        let spectrum = dirichlet::dirichlet_spectrum(&m);
        let coeffs = dirichlet::samples_to_translate_coeffs(&samples, &spectrum)?;
        let bank = dirichlet::filter_bank_from_dirichlet(&m, &n, &j)?;
        let d = wavelet::full_analysis(&coeffs, &bank)?;

        // Split f = f_V + f_W by synthesizing each branch alone.
        let zero_low = LatticeArray::zeros(n.clone(), Domain::Spatial);
        let only_low = WaveletCoefficients {
            branches: vec![d.branches[0].clone(), zero_low.clone()],
        };
        let only_high = WaveletCoefficients {
            branches: vec![zero_low, d.branches[1].clone()],
        };
        let a_v = wavelet::full_synthesis(&only_low, &bank)?;
        let a_w = wavelet::full_synthesis(&only_high, &bank)?;
        let recon_err: f64 = a_v
            .values()
            .iter()
            .zip(a_w.values())
            .zip(coeffs.values())
            .map(|((v, w), orig)| (v + w - orig).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / coeffs.norm().max(1e-300);

        let f_v = dirichlet::translate_coeffs_to_samples(&a_v, &spectrum)?;
        let f_w = dirichlet::translate_coeffs_to_samples(&a_w, &spectrum)?;

        summary.write_output(
            &output_dir.join("samples.csv"),
            io::complex_csv(samples.values()).as_bytes(),
        )?;
        summary.write_output(
            &output_dir.join("coeffs.csv"),
            io::complex_csv(coeffs.values()).as_bytes(),
        )?;
        summary.write_output(
            &output_dir.join("branch_lowpass.csv"),
            io::complex_csv(d.branches[0].values()).as_bytes(),
        )?;
        summary.write_output(
            &output_dir.join("branch_wavelet.csv"),
            io::complex_csv(d.branches[1].values()).as_bytes(),
        )?;
        summary.write_output(&output_dir.join("input.pgm"), &io::magnitude_pgm(&samples))?;
        summary.write_output(&output_dir.join("f_v.pgm"), &io::magnitude_pgm(&f_v))?;
        summary.write_output(&output_dir.join("f_w.pgm"), &io::magnitude_pgm(&f_w))?;

        let total = coeffs.norm().powi(2).max(1e-300);
        summary
            .metrics
            .insert("reconstruction_error".into(), recon_err);
        summary.metrics.insert(
            "lowpass_energy_fraction".into(),
            d.branches[0].norm().powi(2) / total,
        );
        summary.metrics.insert(
            "wavelet_energy_fraction".into(),
            d.branches[1].norm().powi(2) / total,
        );
        println!(
            "reconstruction error {recon_err:.3e}; energy split {:.4} / {:.4}",
            d.branches[0].norm().powi(2) / total,
            d.branches[1].norm().powi(2) / total
        );
        Ok(())
    })?
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_cycles() {
        // i = 1 collapses to a single cycle of length m.
        let m = normal_form_matrix(64, 1, 64);
        let basis = PatternBasis::new(&m).unwrap();
        assert_eq!(basis.cycle_lengths(), &[64 * 64]);

        // i = 0 keeps the diagonal cycles.
        let m = normal_form_matrix(64, 0, 64);
        let basis = PatternBasis::new(&m).unwrap();
        assert_eq!(basis.cycle_lengths(), &[64, 64]);

        // A proper divisor splits accordingly.
        let m = normal_form_matrix(8, 2, 8);
        let basis = PatternBasis::new(&m).unwrap();
        assert_eq!(basis.cycle_lengths(), &[2, 32]);
    }

    #[test]
    fn named_factors_cover_the_demo_set() {
        for name in ["x", "y", "d"] {
            let j = named_factor(name).unwrap();
            let basis = PatternBasis::new(&j).unwrap();
            assert_eq!(basis.det_abs(), 2);
        }
        assert!(named_factor("q").is_none());
    }
}
