//! Command-line front end: solve, verify, sweep, propcheck, embed.
//!
//! Exit codes: 0 success; 1 invalid input; 2 no convergence or not
//! realizable (verify: not accepted); 3 only spurious roots; 4 property
//! violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dziobek::delta::{solution_from_positions, Exponent, Tolerances};
use dziobek::direct::gamma;
use dziobek::error::Error;
use dziobek::geometry::{center_of_mass, embed, squared_distances, MassVector, SquaredDistanceMatrix};
use dziobek::io::{
    to_json_pretty, DistancesFile, PositionsFile, ReportFile, SolutionFile, SolveFile,
    SymmetryBlock, VerifyFile,
};
use dziobek::lemmas::{lemma1_suite, lemma2_suite, lemma3_suite, laguerre_suite, PropertyReport};
use dziobek::solver::{solve_all, SignPattern, SolverOptions};
use dziobek::sweep::{run_sweep, to_csv, SweepSpec};
use dziobek::analysis::{convexity_class, ordering_report, routh_residual, product_relation_residual, symmetry_report, SYMMETRY_TOL};

#[derive(Parser)]
#[command(
    name = "dziobek",
    about = "Central configurations of n bodies in dimension n-2: solve, verify, sweep, certify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the normalized coordinate system for a mass vector and sign pattern.
    Solve(SolveArgs),
    /// Validate a positions JSON file as a central configuration.
    Verify(VerifyArgs),
    /// Embed a squared-distance matrix into Euclidean coordinates.
    Embed(EmbedArgs),
    /// Solve over a mass/exponent grid, emitting CSV rows and a summary.
    Sweep(SweepArgs),
    /// Run an inequality property suite.
    Propcheck(PropcheckArgs),
}

#[derive(Args)]
struct ToleranceArgs {
    /// Override the t-spread acceptance tolerance.
    #[arg(long = "tol-t-spread")]
    tol_t_spread: Option<f64>,
    /// Override the pair-fit residual tolerance.
    #[arg(long = "tol-fit")]
    tol_fit: Option<f64>,
    /// Override the realizability (Cayley-Menger) tolerance.
    #[arg(long = "tol-cm")]
    tol_cm: Option<f64>,
    /// Override the acceleration-condition residual tolerance.
    #[arg(long = "tol-direct")]
    tol_direct: Option<f64>,
}

impl ToleranceArgs {
    fn build(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol_t_spread {
            t.t_spread = v;
        }
        if let Some(v) = self.tol_fit {
            t.dziobek_fit = v;
        }
        if let Some(v) = self.tol_cm {
            t.cayley_menger = v;
        }
        if let Some(v) = self.tol_direct {
            t.direct = v;
        }
        t
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Comma-separated masses, e.g. 1,1,1,1.
    #[arg(long, allow_hyphen_values = true)]
    masses: Option<String>,
    /// Body count for an equal-mass run (alternative to --masses).
    #[arg(long)]
    n: Option<usize>,
    /// Interaction exponent (a < 0 is the guaranteed regime).
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Sign pattern, e.g. --pattern=--++ (two negatives = convex).
    #[arg(long, allow_hyphen_values = true)]
    pattern: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    starts: usize,
    /// Also emit the analysis report for each accepted solution.
    #[arg(long, default_value_t = false)]
    report: bool,
    #[command(flatten)]
    tolerances: ToleranceArgs,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Positions JSON file ({"dim", "points", "masses"}).
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[command(flatten)]
    tolerances: ToleranceArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Distances JSON file ({"s": [[...]]}, masses optional).
    input: PathBuf,
    /// Target embedding dimension.
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep spec JSON file; inline flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Comma-separated mass axes; each axis is a value or start:end:count.
    #[arg(long, allow_hyphen_values = true)]
    masses: Option<String>,
    /// Comma-separated exponent list, e.g. -1.5,-1.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pattern: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    starts: Option<usize>,
    /// Worker threads (0 = default pool).
    #[arg(long)]
    parallelism: Option<usize>,
    /// Output format for the per-point records.
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,
    /// Record output file (CSV or JSON).
    #[arg(long)]
    out: PathBuf,
    /// Write the summary JSON here instead of stdout.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Args)]
struct PropcheckArgs {
    /// One of: lemma1, lemma2, lemma3, laguerre.
    lemma: String,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Minimizer starts (lemma2 only).
    #[arg(long, default_value_t = 100)]
    starts: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{}", e);
            return ExitCode::from(1);
        }
        Err(e) => {
            print!("{}", e);
            return ExitCode::SUCCESS;
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err);
            exit_code_for(&err)
        }
    };
    ExitCode::from(code)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NoConvergence { .. }) | Some(Error::NotRealizable { .. }) => 2,
        Some(Error::SpuriousOnly { .. }) => 3,
        _ => 1,
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn parse_f64_list(text: &str, what: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| anyhow::anyhow!("invalid {} entry '{}'", what, t))
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Propcheck(args) => cmd_propcheck(args),
    }
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<u8> {
    let masses = match (&args.masses, args.n) {
        (Some(list), _) => parse_f64_list(list, "mass")?,
        (None, Some(n)) => vec![1.0; n],
        (None, None) => anyhow::bail!("one of --masses or --n is required"),
    };
    let m = MassVector::new(masses)?;
    let e = Exponent::new_unguaranteed(args.a)?;
    if !e.theorem_regime() {
        eprintln!(
            "warning: a = {} is outside the guaranteed regime (a < 0); results carry no symmetry/ordering guarantees",
            args.a
        );
    }
    let pattern = SignPattern::parse(&args.pattern)?;
    let opts = SolverOptions {
        seed: args.seed,
        starts: args.starts,
        tolerances: args.tolerances.build(),
        ..SolverOptions::default()
    };
    let outcome = solve_all(&m, &e, &pattern, &opts)?;
    let file = SolveFile {
        solutions: outcome.accepted.iter().map(SolutionFile::from_solution).collect(),
        spurious: outcome.spurious.clone(),
        off_pattern: outcome.off_pattern,
    };
    emit(to_json_pretty(&file), &args.out)?;
    if args.report {
        for sol in &outcome.accepted {
            let report = ReportFile {
                symmetry: SymmetryBlock {
                    mirrors: symmetry_report(sol, SYMMETRY_TOL).unwrap_or_default(),
                },
                ordering: ordering_report(sol).ok(),
                routh_residual: routh_residual(sol).ok(),
                product_residual: product_relation_residual(sol).ok(),
                convexity: convexity_class(&sol.deltas),
            };
            emit(to_json_pretty(&report), &None)?;
        }
    }
    if !outcome.accepted.is_empty() {
        Ok(0)
    } else if !outcome.spurious.is_empty() {
        Ok(3)
    } else {
        Ok(2)
    }
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&args.input)?;
    let (config, masses) = PositionsFile::parse(&text)?.into_parts()?;
    let e = Exponent::new_unguaranteed(args.a)?;

    // Fit lambda by least squares over gamma_i = lambda (q_i - q_G), then
    // rescale into the lambda = M gauge before validating.
    let field = gamma(&config, &masses, &e)?;
    let g = center_of_mass(&config, &masses)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..config.len() {
        let r = config.point(i) - &g;
        num += field.gammas[i].dot(&r);
        den += r.norm_squared();
    }
    let lambda_fitted = num / den;
    let scale = if lambda_fitted > 0.0 {
        (masses.total() / lambda_fitted).powf(1.0 / (2.0 * e.a()))
    } else {
        1.0
    };
    let scaled = config.scaled(scale);
    let tol = args.tolerances.build();
    let solution = solution_from_positions(&scaled, &masses, &e, &tol)?;
    let report = VerifyFile {
        scale_applied: scale,
        lambda_fitted,
        validation: dziobek::delta::validate(&solution, &tol)?,
    };
    let accepted = report.validation.accepted;
    emit(to_json_pretty(&report), &args.out)?;
    Ok(if accepted { 0 } else { 2 })
}

fn cmd_embed(args: EmbedArgs) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&args.input)?;
    let file = DistancesFile::parse(&text)?;
    let n = file.s.len();
    let s = SquaredDistanceMatrix::from_rows(&file.s)?;
    let config = embed(&s, args.dim)?;
    // Round-trip confirmation is part of the output contract.
    let back = squared_distances(&config)?;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let scale = s.get(i, j).abs().max(1.0);
            worst = worst.max((back.get(i, j) - s.get(i, j)).abs() / scale);
        }
    }
    if worst > 1e-10 {
        anyhow::bail!(Error::NotRealizable {
            dim: args.dim,
            most_negative: -worst,
            excess_rank: 0,
        });
    }
    let out = PositionsFile {
        dim: args.dim,
        points: config.rows(),
        masses: file.masses.unwrap_or_else(|| vec![1.0; n]),
    };
    emit(to_json_pretty(&out), &args.out)?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<u8> {
    let mut spec: SweepSpec = match &args.spec {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| anyhow::anyhow!("sweep spec JSON: {}", e))?,
        None => SweepSpec {
            masses: Vec::new(),
            exponents: Vec::new(),
            pattern: String::new(),
            tolerances: Tolerances::default(),
            seed: 0,
            parallelism: 0,
            starts: 16,
        },
    };
    if let Some(masses) = &args.masses {
        spec.masses = masses.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(a) = &args.a {
        spec.exponents = parse_f64_list(a, "exponent")?;
    }
    if let Some(pattern) = &args.pattern {
        spec.pattern = pattern.clone();
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(starts) = args.starts {
        spec.starts = starts;
    }
    if let Some(parallelism) = args.parallelism {
        spec.parallelism = parallelism;
    }
    spec.tolerances = args.tolerances.build();
    if spec.masses.is_empty() || spec.exponents.is_empty() || spec.pattern.is_empty() {
        anyhow::bail!(Error::InvalidInput(
            "sweep needs mass axes, exponents, and a sign pattern (via --spec or flags)".into()
        ));
    }

    let (records, summary) = run_sweep(&spec)?;
    let n = spec.masses.len();
    let payload = if args.format == "json" {
        to_json_pretty(&records)
    } else {
        to_csv(&records, n)
    };
    std::fs::write(&args.out, payload)?;
    let total_ms: f64 = records.iter().map(|r| r.wall_ms).sum();
    eprintln!(
        "swept {} points in {:.1} ms total solver time",
        records.len(),
        total_ms
    );
    emit(to_json_pretty(&summary), &args.summary)?;
    Ok(0)
}

fn cmd_propcheck(args: PropcheckArgs) -> anyhow::Result<u8> {
    let report: PropertyReport = match args.lemma.as_str() {
        "lemma1" => lemma1_suite(args.samples.unwrap_or(20), args.seed),
        "lemma2" => lemma2_suite(args.samples.unwrap_or(100_000), args.starts, args.seed),
        "lemma3" => lemma3_suite(args.samples.unwrap_or(10_000), args.seed),
        "laguerre" => laguerre_suite(args.samples.unwrap_or(10_000), args.seed),
        other => anyhow::bail!(Error::InvalidInput(format!(
            "unknown lemma id '{}'; expected lemma1, lemma2, lemma3, or laguerre",
            other
        ))),
    };
    let pass = report.pass;
    emit(to_json_pretty(&report), &args.out)?;
    Ok(if pass { 0 } else { 4 })
}
