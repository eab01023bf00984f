use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use ridgefp::solvers::resolve_sigma1;
use ridgefp::spectral::{
    admissible_upper, optimal_rate, optimal_theta, rho, spectrum_g1, spectrum_g2, spectrum_g3, spectrum_m1, spectrum_m2,
};
use ridgefp::{
    complexity_factors, conditioning, generate_problem, load_problem, solve, theta_thresholds,
    write_problem, write_trace, ComplexSpectrum, Distribution, GeneratorSpec, Method, MethodReport, RidgeProblem,
    SigmaSource, SolverConfig, SpectralInfo, Status, ThetaChoice,
};
use serde_json::json;

use crate::args::{BenchArgs, DistArg, GenArgs, ProblemSource, RunOptions, SolveArgs, SpectrumArgs, SweepArgs};

pub fn load(source: &ProblemSource) -> Result<RidgeProblem> {
    match (&source.problem, &source.generator) {
        (Some(path), _) => load_problem(path).with_context(|| format!("loading {}", path.display())),
        (None, Some(spec)) => generate_problem(spec).context("generating problem"),
        (None, None) => bail!("a problem file or --gen spec is required"),
    }
}

fn sigma_source(run: &RunOptions) -> SigmaSource {
    if run.exact_sigma {
        SigmaSource::ExactSvd
    } else {
        SigmaSource::PowerIteration
    }
}

/// Runs one method and packages the outcome; `sigma1` is the value used for
/// optimal relaxation and the theoretical rate.
fn run_method(
    p: &RidgeProblem,
    s: &SpectralInfo,
    method: Method,
    theta: ThetaChoice,
    run: &RunOptions,
    sigma1: f64,
    include_solution: bool,
) -> Result<(MethodReport, ridgefp::SolveResult)> {
    let cfg = SolverConfig::new(method)
        .theta(theta)
        .tol(run.tol)
        .max_iter(run.max_iter)
        .record_trace(true)
        .sigma_source(SigmaSource::Known(sigma1));
    let result = solve(p, &cfg, &p.zero_point())?;
    let kappa = conditioning(p, s).kappa;
    let report = MethodReport::from_run(p, method, &result, sigma1, kappa, complexity_factors(s), include_solution);
    Ok((report, result))
}

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::Converged => 0,
        Status::MaxIter => 2,
        Status::Diverged => 3,
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let p = load(&args.source)?;
    let s = SpectralInfo::from_problem(&p)?;
    let sigma1 = resolve_sigma1(&p, sigma_source(&args.run))?;
    let (report, result) = run_method(&p, &s, args.method, args.theta.0, &args.run, sigma1, true)?;
    if let Some(path) = &args.trace {
        let trace = result.trace.as_ref().context("solver returned no trace")?;
        write_trace(trace, path).with_context(|| format!("writing trace to {}", path.display()))?;
    }
    eprintln!(
        "{}: {:?} after {} iterations (theta {}, final gap {})",
        args.method,
        result.status,
        result.iterations,
        report.theta.map_or("n/a".into(), |t| format!("{t:.6}")),
        report.final_gap.map_or("n/a".into(), |g| format!("{g:.3e}")),
    );
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(exit_code(result.status))
}

fn spectrum_rows(out: &mut String, label: &str, spectrum: &ComplexSpectrum) {
    for z in &spectrum.eigenvalues {
        out.push_str(&format!("{label},{:e},{:e}\n", z.re, z.im));
    }
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<u8> {
    if !args.theta.is_finite() {
        bail!("--theta must be finite");
    }
    let p = load(&args.source)?;
    let s = SpectralInfo::from_problem(&p)?;
    let bars = theta_thresholds(&s).theta_bar;
    let mut csv = String::from("matrix,re,im\n");
    let matrices = [
        ("M1", spectrum_m1(&s)),
        ("M2", spectrum_m2(&s)),
        ("G1", spectrum_g1(&s, args.theta)),
        ("G2", spectrum_g2(&s, args.theta)),
        ("G3", spectrum_g3(&s, args.theta)),
    ];
    for (label, spectrum) in &matrices {
        spectrum_rows(&mut csv, label, spectrum);
    }
    for bar in &bars {
        csv.push_str(&format!("theta_bar,{bar:e},0e0\n"));
    }
    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;
    let radii: serde_json::Map<String, serde_json::Value> =
        matrices.iter().map(|(label, sp)| (label.to_string(), json!(sp.spectral_radius()))).collect();
    eprintln!("wrote {} eigenvalues per matrix to {}", s.dim(), args.out.display());
    let summary = json!({
        "out": args.out,
        "theta": args.theta,
        "dimension": s.dim(),
        "spectral_radius": radii,
        "theta_bar": bars,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

pub fn cmd_sweep_theta(args: &SweepArgs) -> Result<u8> {
    let family = args
        .method
        .rate_family()
        .with_context(|| format!("{} has no relaxation parameter to sweep", args.method))?;
    if args.grid == 0 {
        bail!("--grid must be positive");
    }
    let p = load(&args.source)?;
    let sigma1 = resolve_sigma1(&p, sigma_source(&args.run))?;
    let lambda_n = p.lambda_n();
    let upper = admissible_upper(family, sigma1, lambda_n);
    let thetas: Vec<f64> = (1..=args.grid).map(|i| 1.1 * upper * i as f64 / args.grid as f64).collect();
    let rows: Vec<(f64, f64, Option<usize>)> = thetas
        .par_iter()
        .map(|&theta| {
            let cfg = SolverConfig::new(args.method)
                .theta(ThetaChoice::Explicit(theta))
                .tol(args.run.tol)
                .max_iter(args.run.max_iter);
            let result = solve(&p, &cfg, &p.zero_point())?;
            let iterations = (result.status == Status::Converged).then_some(result.iterations);
            Ok((theta, rho(family, sigma1, lambda_n, theta), iterations))
        })
        .collect::<Result<_>>()?;
    let mut csv = String::from("theta,rho_theory,converged,iters_to_tol\n");
    for (theta, rate, iterations) in &rows {
        let iters = iterations.map_or(String::new(), |k| k.to_string());
        csv.push_str(&format!("{theta:e},{rate:e},{},{iters}\n", u8::from(iterations.is_some())));
    }
    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;
    let converged = rows.iter().filter(|r| r.2.is_some()).count();
    eprintln!("{}: {converged} of {} grid points converged", args.method, rows.len());
    let summary = json!({
        "out": args.out,
        "method": args.method,
        "admissible_upper": upper,
        "theta_optimal": optimal_theta(family, sigma1, lambda_n),
        "rho_optimal": optimal_rate(family, sigma1, lambda_n),
        "grid": rows.len(),
        "converged": converged,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let methods: Vec<Method> = if args.methods.is_empty() { Method::ALL.to_vec() } else { args.methods.clone() };
    let p = load(&args.source)?;
    let s = SpectralInfo::from_problem(&p)?;
    let sigma1 = resolve_sigma1(&p, sigma_source(&args.run))?;
    let reports: Vec<MethodReport> = methods
        .par_iter()
        .map(|&method| {
            run_method(&p, &s, method, ThetaChoice::Optimal, &args.run, sigma1, false).map(|(report, _)| report)
        })
        .collect::<Result<_>>()?;
    for r in &reports {
        eprintln!("{:>6}: {:>8} iterations, {:?}", r.method.to_string(), r.iterations, r.status.unwrap_or(Status::MaxIter));
    }
    let text = serde_json::to_string_pretty(&reports)?;
    if let Some(path) = &args.out {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{text}");
    Ok(0)
}

pub fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let distribution = match args.dist {
        DistArg::Normal => Distribution::StandardNormal,
        DistArg::Uniform => Distribution::Uniform01,
    };
    let mut spec = GeneratorSpec::new(args.d, args.n, args.m, args.seed).with_distribution(distribution);
    if let Some(lambda) = args.lambda {
        spec = spec.with_lambda(lambda);
    }
    let p = generate_problem(&spec)?;
    write(&p, &args.out)?;
    eprintln!("wrote {} ({} x {})", args.out.display(), p.d(), p.big_n());
    let summary = json!({ "out": args.out, "spec": spec.to_string(), "d": p.d(), "n": p.n(), "m": p.m(), "lambda": p.lambda() });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

fn write(p: &RidgeProblem, path: &Path) -> Result<()> {
    write_problem(p, path).with_context(|| format!("writing {}", path.display()))
}
