//! `specmom` command-line driver. Every subcommand writes CSV (default) or
//! JSON to stdout, headed by a run manifest.

mod output;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use specmom::analysis::{bounds_table, empirical_growth, EllipseSpec};
use specmom::matio::{barbell, parse_matrix_market, toy_matrix, write_matrix_market};
use specmom::region::{boundary, classify_grid};
use specmom::walk_approx::{alpha_coeffs, approximate_with, azuma_tail};
use specmom::{
    cusps, dominant_root, dynamic_momentum, power_iterate, prob, selfcheck, static_momentum,
    Complex, Error, MatrixOperator, ProbVector, RunOptions, Solution, SolverConfig, Vector,
};

use output::{Cell, Format, Manifest, Table};

#[derive(Parser)]
#[command(
    name = "specmom",
    version,
    about = "Random-walk polynomial families and momentum power iterations"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    out: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary curve, cusps, or a membership grid of the stability region.
    Region {
        #[arg(long)]
        prob: String,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Classify a SIZE x SIZE lattice instead of sampling the boundary.
        #[arg(long, value_name = "SIZE")]
        grid: Option<usize>,
        /// Half-width of the lattice.
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.5)]
        extent: f64,
    },
    /// |P_n(1 + eps)| against the predicted geometric rate.
    PolyGrowth {
        #[arg(long)]
        prob: String,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long = "n", default_value_t = 2000)]
        n_max: usize,
    },
    /// Random-walk expansion coefficients of z^n and the truncation error.
    Approx {
        #[arg(long)]
        prob: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        t: f64,
        /// Evaluation point as `re` or `re,im`.
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex,
    },
    /// Ellipse, min-max, growth and disk bounds at gamma = 1 + eps.
    Bounds {
        #[arg(long)]
        prob: String,
        #[arg(
            long,
            allow_negative_numbers = true,
            conflicts_with = "delta",
            required_unless_present = "delta"
        )]
        rho: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long = "n", default_value_t = 50)]
        n_max: usize,
    },
    /// Plain power iteration.
    Power {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Momentum power iteration with a fixed lambda_*.
    Momentum {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        prob: String,
        #[arg(long, allow_negative_numbers = true)]
        lambda_star: f64,
    },
    /// Momentum power iteration with lambda_* estimated on the fly.
    Dynamic {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        prob: String,
        /// Let the residual ratio fall below the contraction threshold.
        #[arg(long)]
        no_rho_floor: bool,
    },
    /// Write a random directed barbell graph as Matrix Market.
    Barbell {
        /// Vertices per half.
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the built-in invariant checks.
    Selfcheck,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MatrixArgs {
    /// Matrix Market coordinate file.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// The 4x4 toy matrix diag(1.01, 1) plus a rotation block.
    #[arg(long)]
    toy: bool,
    /// Generated barbell graph `N,p,seed`.
    #[arg(long, value_name = "N,p,seed", value_parser = parse_barbell)]
    barbell: Option<(usize, f64, u64)>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Seed of the random starting vector.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground-truth eigenvector, one `re` or `re im` entry per line.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Stop once the residual d_k drops to this value.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn parse_complex(s: &str) -> Result<Complex, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err("expected `re` or `re,im`".into()),
    }
}

fn parse_barbell(s: &str) -> Result<(usize, f64, u64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, p, seed] = parts.as_slice() else {
        return Err("expected `N,p,seed`".into());
    };
    let p = match p.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.parse().map_err(|e| format!("p: {e}"))?;
            let b: f64 = b.parse().map_err(|e| format!("p: {e}"))?;
            a / b
        }
        None => p.parse().map_err(|e| format!("p: {e}"))?,
    };
    Ok((
        n.parse().map_err(|e| format!("N: {e}"))?,
        p,
        seed.parse().map_err(|e| format!("seed: {e}"))?,
    ))
}

/// Named law or comma-separated entries. Unparseable input is a usage
/// error; a well-formed vector that is not a valid law is a domain error.
fn load_prob(s: &str) -> anyhow::Result<ProbVector> {
    if let Some(p) = prob::named(s) {
        return Ok(p);
    }
    match s.parse::<ProbVector>() {
        Ok(p) => Ok(p),
        Err(e @ Error::ParseProb(_)) => Err(UsageError(format!("--prob: {e}")).into()),
        Err(e) => Err(anyhow!(e).context(format!("--prob {s}"))),
    }
}

fn load_matrix(args: &MatrixArgs) -> anyhow::Result<(MatrixOperator, Option<Vector>)> {
    if let Some(path) = &args.matrix {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let a = parse_matrix_market(BufReader::new(file))
            .with_context(|| format!("reading {}", path.display()))?;
        Ok((a, None))
    } else if let Some((n, p, seed)) = args.barbell {
        Ok((barbell(n, p, seed)?, None))
    } else {
        let mut e1 = vec![Complex::new(0.0, 0.0); 4];
        e1[0] = Complex::new(1.0, 0.0);
        Ok((toy_matrix(), Some(e1)))
    }
}

fn load_truth(path: &PathBuf) -> anyhow::Result<Vector> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        match nums.as_slice() {
            [re] => out.push(Complex::new(*re, 0.0)),
            [re, im] => out.push(Complex::new(*re, *im)),
            _ => {
                return Err(anyhow!(
                    "{}:{}: expected `re` or `re im`",
                    path.display(),
                    i + 1
                ))
            }
        }
    }
    Ok(out)
}

fn run_options(
    run: &RunArgs,
    default_truth: Option<Vector>,
    n: usize,
) -> anyhow::Result<RunOptions> {
    let mut opts = RunOptions::new(run.iters).with_seed(run.seed);
    let truth = match &run.truth {
        Some(path) => Some(load_truth(path)?),
        None => default_truth,
    };
    if let Some(t) = truth {
        if t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.len(),
            })
            .context("--truth");
        }
        opts = opts.with_truth(t);
    }
    if let Some(tol) = run.tol {
        opts = opts.with_tolerance(tol);
    }
    Ok(opts)
}

fn trace_table(sol: &Solution) -> Table {
    let mut t = Table::new(&["k", "h_k", "nu_k", "d_k", "rho_k", "r_k", "relerr"]);
    for r in &sol.trace.records {
        t.push(vec![
            r.k.into(),
            r.h.into(),
            r.nu.into(),
            r.d.into(),
            r.rho.into(),
            r.r.into(),
            r.relerr.into(),
        ]);
    }
    t.note("status", format!("{:?}", sol.status).to_lowercase());
    t.note("iterations", sol.iterations);
    t.note("eigenvalue", Cell::from(sol.eigenvalue).csv_text());
    if let Some(e) = sol.final_relerr() {
        t.note_num("final relerr", e);
    }
    if let Some(r) = sol.trace.records.last().and_then(|r| r.r) {
        t.note_num("final r", r);
    }
    t
}

fn region_table(
    prob: &ProbVector,
    samples: usize,
    grid: Option<usize>,
    extent: f64,
) -> anyhow::Result<Table> {
    let cs = cusps(prob);
    let mut t = match grid {
        Some(size) => {
            let mut t = Table::new(&["re", "im", "membership"]);
            for g in classify_grid(prob, size, extent)? {
                t.push(vec![
                    g.z.re.into(),
                    g.z.im.into(),
                    g.membership.as_str().into(),
                ]);
            }
            t
        }
        None => {
            let mut t = Table::new(&["t", "re", "im"]);
            for s in boundary(prob, samples)?.samples {
                t.push(vec![s.t.into(), s.z.re.into(), s.z.im.into()]);
            }
            t
        }
    };
    t.note("prob", prob);
    t.note_num("sigma^2", prob.variance());
    t.note("cusps", cs.summary());
    Ok(t)
}

fn growth_table(prob: &ProbVector, eps: f64, n_max: usize) -> anyhow::Result<Table> {
    let report = empirical_growth(prob, eps, n_max)?;
    let mut t = Table::new(&["n", "P_n", "predicted"]);
    for r in &report.rows {
        t.push(vec![r.n.into(), r.value.into(), r.predicted.into()]);
    }
    t.note_num("predicted rate", 1.0 + (2.0 * eps).sqrt() / prob.sigma());
    if let Some(r) = report.last_ratio() {
        t.note_num("last ratio", r);
    }
    t.note_num(
        "dominant root",
        dominant_root(prob, Complex::new(1.0 + eps, 0.0))?.re,
    );
    if let Some(n) = report.truncated_at {
        t.note("overflow at n", n);
    }
    Ok(t)
}

fn approx_table(prob: &ProbVector, n: usize, tt: f64, z: Complex) -> anyhow::Result<Table> {
    if n < 1 || !(tt > 0.0 && tt.is_finite()) {
        return Err(Error::DomainError(format!("need n >= 1 and t > 0, got n={n}, t={tt}")).into());
    }
    let coeffs = alpha_coeffs(prob, n);
    let a = approximate_with(&coeffs, prob, z, tt)?;
    let mut t = Table::new(&["k", "alpha_k"]);
    for (k, al) in coeffs.alpha.iter().enumerate() {
        t.push(vec![k.into(), (*al).into()]);
    }
    t.note("n", n);
    t.note_num("t", tt);
    t.note("z", Cell::from(z).csv_text());
    t.note("degree", a.degree);
    t.note_num("error", (a.approx - z.powi(n as i32)).norm());
    t.note_num("tail mass", a.tail_mass);
    t.note_num("azuma bound", azuma_tail(prob.order(), tt));
    Ok(t)
}

fn bounds_rows(
    prob: &ProbVector,
    spec: EllipseSpec,
    eps: f64,
    n_max: usize,
) -> anyhow::Result<Table> {
    let spec = spec.validate()?;
    let rows = bounds_table(prob, spec.rho(), eps, n_max)?;
    let mut t = Table::new(&[
        "n",
        "ellipse_upper",
        "minmax_lower",
        "minmax_upper",
        "growth_lower",
        "disk",
    ]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.ellipse_upper.into(),
            r.minmax_lower.into(),
            r.minmax_upper.into(),
            r.growth_lower.into(),
            r.disk.into(),
        ]);
    }
    t.note_num("rho", spec.rho());
    t.note_num("delta", spec.delta());
    t.note_num("eps", eps);
    Ok(t)
}

fn selfcheck_table() -> (Table, bool) {
    let results = selfcheck::run();
    let mut t = Table::new(&["check", "passed", "detail"]);
    let ok = results.iter().all(|c| c.passed);
    for c in results {
        t.push(vec![
            c.name.into(),
            if c.passed { "true" } else { "false" }.into(),
            c.detail.as_str().into(),
        ]);
    }
    t.note(
        "result",
        if ok {
            "all checks passed"
        } else {
            "some checks failed"
        },
    );
    (t, ok)
}

fn emit(table: &Table, manifest: &Manifest, format: Format) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match table.write(&mut out, manifest, format) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn write_barbell(n: usize, p: f64, seed: u64, output: Option<&PathBuf>) -> anyhow::Result<()> {
    let a = barbell(n, p, seed)?;
    let manifest = Manifest::new("barbell", Some(seed));
    let text = write_matrix_market(&a);
    let (header, body) = text.split_once('\n').unwrap_or((&text, ""));
    let doc = format!("{header}\n% {}\n{body}", serde_json::to_string(&manifest)?);
    match output {
        Some(path) => {
            std::fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().lock().write_all(doc.as_bytes())?,
    }
    Ok(())
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var("SPECMOM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        UsageError(format!(
            "SPECMOM_THREADS must be a non-negative integer, got {raw:?}"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| UsageError(e.to_string()))?;
    }
    log::debug!("thread pool size {}", rayon::current_num_threads());
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let format = cli.out;
    match cli.command {
        Command::Region {
            prob,
            samples,
            grid,
            extent,
        } => {
            let t = region_table(&load_prob(&prob)?, samples, grid, extent)?;
            emit(&t, &Manifest::new("region", None), format)?;
        }
        Command::PolyGrowth { prob, eps, n_max } => {
            let t = growth_table(&load_prob(&prob)?, eps, n_max)?;
            emit(&t, &Manifest::new("poly-growth", None), format)?;
        }
        Command::Approx { prob, n, t, z } => {
            let table = approx_table(&load_prob(&prob)?, n, t, z)?;
            emit(&table, &Manifest::new("approx", None), format)?;
        }
        Command::Bounds {
            prob,
            rho,
            delta,
            eps,
            n_max,
        } => {
            let spec = match (rho, delta) {
                (Some(r), _) => EllipseSpec::Rho(r),
                (None, Some(d)) => EllipseSpec::Delta(d),
                (None, None) => unreachable!("clap requires --rho or --delta"),
            };
            let t = bounds_rows(&load_prob(&prob)?, spec, eps, n_max)?;
            emit(&t, &Manifest::new("bounds", None), format)?;
        }
        Command::Power { matrix, run } => {
            let (a, truth) = load_matrix(&matrix)?;
            let opts = run_options(&run, truth, a.dim())?;
            let sol = power_iterate(&a, None, &opts)?;
            emit(
                &trace_table(&sol),
                &Manifest::new("power", Some(run.seed)),
                format,
            )?;
        }
        Command::Momentum {
            matrix,
            run,
            prob,
            lambda_star,
        } => {
            let p = load_prob(&prob)?;
            let (a, truth) = load_matrix(&matrix)?;
            let mut cfg = SolverConfig::new(p, run.iters).with_lambda_star(lambda_star);
            cfg.run = run_options(&run, truth, a.dim())?;
            let sol = static_momentum(&a, None, &cfg)?;
            emit(
                &trace_table(&sol),
                &Manifest::new("momentum", Some(run.seed)),
                format,
            )?;
        }
        Command::Dynamic {
            matrix,
            run,
            prob,
            no_rho_floor,
        } => {
            let p = load_prob(&prob)?;
            let (a, truth) = load_matrix(&matrix)?;
            let mut cfg = SolverConfig::new(p, run.iters);
            cfg.rho_floor = !no_rho_floor;
            cfg.run = run_options(&run, truth, a.dim())?;
            let sol = dynamic_momentum(&a, None, &cfg)?;
            emit(
                &trace_table(&sol),
                &Manifest::new("dynamic", Some(run.seed)),
                format,
            )?;
        }
        Command::Barbell { n, p, seed, output } => write_barbell(n, p, seed, output.as_ref())?,
        Command::Selfcheck => {
            let (t, ok) = selfcheck_table();
            emit(&t, &Manifest::new("selfcheck", None), format)?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
