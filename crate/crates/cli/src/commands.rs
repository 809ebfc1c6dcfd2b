use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;
use serde::Serialize;

use qrand_core::extraction::{end_to_end_extract, optimize_alpha, HashSeedSource, RateQuery};
use qrand_core::intrinsic::{
    cq_entropy, extremal_perturbation, extremality_margin, max_intrinsic_pvm, mub_pvm,
    optimality_residual, qubit_optimal_for, source_gamma, uniform_povm, ExtremalityCertificate,
};
use qrand_core::oracle::{run_suite, VerificationReport, SUITE_NAMES};
use qrand_core::quantum::json::{parse_density, parse_measurement, MeasurementJson};
use qrand_core::{DensityMatrix, EntropyFamily, Error, MeasurementKind, RenyiOrder};

use crate::csv::{g12, row};
use crate::{
    ConstructArgs, ExtractArgs, GridArg, KindArg, RateArgs, SweepAlphaArgs, SweepNArgs, VerifyArgs,
};

pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn report(&self) {
        match self {
            CliError::Core(e) => report_error(e.kind(), &e.to_string()),
            CliError::Io { path, source } => report_error("io", &format!("{}: {source}", path.display())),
            CliError::Usage(msg) => report_error("usage", msg),
        }
    }
}

pub fn report_error(kind: &str, message: &str) {
    let body = serde_json::json!({ "error": kind, "message": message.trim_end() });
    eprintln!("{body}");
}

type CliResult<T = ExitCode> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("QRAND_THREADS") else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return usage(format!("QRAND_THREADS must be a positive integer, got {raw:?}")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.into(), source })
}

fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    Ok(parse_density(&read(path)?)?)
}

fn parse_hex_u64(s: &str, what: &str) -> CliResult<u64> {
    let digits = s.trim().trim_start_matches("0x");
    u64::from_str_radix(digits, 16).or_else(|_| usage(format!("{what} must be hexadecimal, got {s:?}")))
}

fn check_epsilon(eps: f64) -> CliResult<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        usage(format!("epsilon = {eps} is outside (0, 1]"))
    }
}

pub fn rate(args: RateArgs) -> CliResult {
    check_epsilon(args.epsilon)?;
    if args.n == 0 {
        return usage("n must be positive");
    }
    let rho = load_state(&args.state)?;
    let report = optimize_alpha(&RateQuery {
        rho,
        epsilon: args.epsilon,
        n: args.n,
        class: args.class.into(),
        bound: args.bound.into(),
    })?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("rate_bits_per_copy: {}", g12(report.rate_bits_per_copy));
        println!("alpha_star: {}", g12(report.alpha_star));
        println!("total_bits: {}", report.total_bits);
        println!("asymptotic_rate: {}", g12(report.asymptotic_rate));
        println!("at_boundary: {}", report.at_boundary);
    }
    Ok(ExitCode::SUCCESS)
}

fn grid(min: f64, max: f64, points: usize, spacing: GridArg) -> Vec<f64> {
    (0..points)
        .map(|k| {
            let t = k as f64 / (points - 1) as f64;
            if k == points - 1 {
                max
            } else {
                match spacing {
                    GridArg::Linear => min + (max - min) * t,
                    GridArg::Log => min * (max / min).powf(t),
                }
            }
        })
        .collect()
}

pub fn sweep_alpha(args: SweepAlphaArgs) -> CliResult {
    let (lo, hi) = (args.alpha_min, args.alpha_max);
    if !(lo >= 0.5 && lo < hi && hi.is_finite()) {
        return usage(format!("need 0.5 <= alpha-min < alpha-max < inf, got [{lo}, {hi}]"));
    }
    if args.points < 2 {
        return usage("points must be at least 2");
    }
    let rho = load_state(&args.state)?;
    let family: EntropyFamily = args.family.into();
    let mut alphas = grid(lo, hi, args.points, args.grid);
    if family == EntropyFamily::SandwichedUp {
        let before = alphas.len();
        alphas.retain(|&a| a > 1.0);
        if alphas.len() < before {
            eprintln!("warning: {} grid points with alpha <= 1 omitted for the up family", before - alphas.len());
        }
    }
    let extra = match MeasurementKind::from(args.class) {
        MeasurementKind::Pvm => 0.0,
        MeasurementKind::Povm => (rho.dim() as f64).log2(),
    };
    let values = alphas
        .par_iter()
        .map(|&a| Ok(max_intrinsic_pvm(&rho, family, RenyiOrder::new(a)?)?.value_bits + extra))
        .collect::<Result<Vec<f64>, Error>>()?;
    let mut out = String::from("alpha,value_bits\n");
    for (a, v) in alphas.iter().zip(values) {
        out.push_str(&row(&[g12(*a), g12(v)]));
    }
    write(&args.out, out)?;
    Ok(ExitCode::SUCCESS)
}

fn n_grid(min: u64, max: u64, points: usize) -> Vec<u64> {
    let mut ns: Vec<u64> = (0..points)
        .map(|k| {
            let t = k as f64 / (points - 1) as f64;
            ((min as f64) * (max as f64 / min as f64).powf(t)).round() as u64
        })
        .collect();
    ns[0] = min;
    ns[points - 1] = max;
    ns.dedup();
    ns
}

pub fn sweep_n(args: SweepNArgs) -> CliResult {
    for &eps in &args.epsilon {
        check_epsilon(eps)?;
    }
    if !(args.n_min >= 1 && args.n_min < args.n_max) {
        return usage(format!("need 1 <= n-min < n-max, got [{}, {}]", args.n_min, args.n_max));
    }
    if args.points < 2 {
        return usage("points must be at least 2");
    }
    let rho = load_state(&args.state)?;
    let ns = n_grid(args.n_min, args.n_max, args.points);
    let jobs: Vec<(f64, u64)> = args.epsilon.iter().flat_map(|&e| ns.iter().map(move |&n| (e, n))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(epsilon, n)| {
            optimize_alpha(&RateQuery {
                rho: rho.clone(),
                epsilon,
                n,
                class: args.class.into(),
                bound: args.bound.into(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = String::from("n,epsilon,rate,alpha_star,at_boundary\n");
    for ((eps, n), r) in jobs.iter().zip(reports) {
        out.push_str(&row(&[
            n.to_string(),
            g12(*eps),
            g12(r.rate_bits_per_copy),
            g12(r.alpha_star),
            r.at_boundary.to_string(),
        ]));
    }
    write(&args.out, out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ConstructOutput {
    #[serde(flatten)]
    measurement: MeasurementJson,
    certificate: ExtremalityCertificate,
    gamma: f64,
    optimality_residual: f64,
    entropy_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_distance: Option<f64>,
}

pub fn construct(args: ConstructArgs) -> CliResult {
    let alpha: RenyiOrder = args.alpha.parse()?;
    let family: EntropyFamily = args.family.into();
    let gamma = source_gamma(family, alpha)?.value();
    let rho = load_state(&args.state)?;
    if args.kind == KindArg::QubitOpt && rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("qubit-opt needs a qubit state, got dimension {}", rho.dim())).into());
    }
    let mut max_distance = None;
    let meas = match args.kind {
        KindArg::Mub => mub_pvm(&rho),
        KindArg::QubitOpt => qubit_optimal_for(&rho, gamma)?,
        KindArg::Uniform => uniform_povm(&rho),
        KindArg::UniformExtremal => {
            let out = extremal_perturbation(&uniform_povm(&rho), args.delta)?;
            max_distance = Some(out.max_distance);
            out.measurement
        }
    };
    let output = ConstructOutput {
        measurement: MeasurementJson::from_measurement(&meas),
        certificate: extremality_margin(&meas)?,
        gamma,
        optimality_residual: optimality_residual(&rho, &meas, gamma)?,
        entropy_bits: cq_entropy(&rho, &meas, family, alpha)?,
        max_distance,
    };
    let text = serde_json::to_string_pretty(&output).expect("measurement serializes");
    write(&args.out, text + "\n")?;
    println!(
        "{} outcomes, extremal: {}, residual: {}",
        meas.len(),
        output.certificate.is_extremal,
        g12(output.optimality_residual)
    );
    Ok(ExitCode::SUCCESS)
}

pub fn extract(args: ExtractArgs) -> CliResult {
    check_epsilon(args.epsilon)?;
    if args.n == 0 {
        return usage("n must be positive");
    }
    let rng_seed = parse_hex_u64(&args.rng_seed, "rng-seed")?;
    let hash_seed = match args.hash_seed.trim() {
        "random" => HashSeedSource::Random,
        hex => HashSeedSource::Hex(hex.to_string()),
    };
    let rho = load_state(&args.state)?;
    let meas = parse_measurement(&read(&args.measurement)?)?;
    if meas.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {}, state on {}",
            meas.dim(),
            rho.dim()
        ))
        .into());
    }
    let x = end_to_end_extract(&rho, &meas, args.n, args.epsilon, rng_seed, &hash_seed)?;
    write(&args.out, x.bits.to_bytes_msb())?;
    write(&args.meta, serde_json::to_string_pretty(&x.meta).expect("meta serializes") + "\n")?;
    println!("{} bits from {} raw bits (alpha* = {})", x.bits.len(), x.raw_bits, g12(x.report.alpha_star));
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> CliResult {
    let seed = parse_hex_u64(&args.seed, "seed")?;
    let names: Vec<&str> = match args.suites.trim() {
        "all" => SUITE_NAMES.to_vec(),
        list => list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect(),
    };
    if names.is_empty() {
        return usage("no suites selected");
    }
    if let Some(bad) = names.iter().find(|n| !SUITE_NAMES.contains(n)) {
        return usage(format!("unknown suite {bad:?}; known: {}", SUITE_NAMES.join(", ")));
    }
    let reports = names
        .par_iter()
        .map(|name| run_suite(name, seed))
        .collect::<Result<Vec<VerificationReport>, Error>>()?;
    for r in &reports {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {} trials={} max_deviation={} tolerance={}",
            r.suite,
            r.trials,
            g12(r.max_deviation),
            g12(r.tolerance)
        );
    }
    if let Some(path) = &args.out {
        write(path, serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n")?;
    }
    Ok(if reports.iter().all(|r| r.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
