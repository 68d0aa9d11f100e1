//! Command-line front end: merge p-values, run Monte Carlo estimation,
//! evaluate the closed-form analytics, and reproduce the figures as CSV.
//!
//! Exit codes: 0 success, 2 usage/parse error, 3 numerical-accuracy
//! failure, 4 I/O failure.

mod figures;
mod fmt;

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::process::ExitCode;
use subuni::copula::parse::{parse_model, parse_stat};
use subuni::mc::{scan_subuniformity, SimulationPlan};
use subuni::merge::{merge, MergeStatistic, PValues, Weights};
use subuni::Error;

use fmt::sig12;

#[derive(Parser)]
#[command(name = "subuni", about = "Generalized-mean p-value merging under dependence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combine p-values with a merging statistic
    Merge(MergeArgs),
    /// Monte Carlo estimation of P(merged statistic <= p) over a grid
    Estimate(EstimateArgs),
    /// Closed-form quantities (exact CDFs, bounds, thresholds)
    Analytics(AnalyticsArgs),
    /// Reproduce a named figure as CSV (optionally SVG)
    Figure(FigureArgs),
}

#[derive(Args)]
struct MergeArgs {
    /// Merging method: rmean, simes, or cauchy
    #[arg(long)]
    method: String,
    /// Exponent for rmean (r = 0 is the geometric mean)
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Comma-separated weights (default: equal)
    #[arg(long)]
    weights: Option<String>,
    /// Comma-separated p-values in (0,1)
    #[arg(long)]
    pvalues: String,
}

#[derive(Args)]
struct EstimateArgs {
    /// Copula spec, e.g. clayton:n=5,t=1
    #[arg(long)]
    copula: String,
    /// Statistic spec, e.g. rmean:r=-1
    #[arg(long)]
    stat: String,
    /// Comma-separated ascending significance grid
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 1_000_000)]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    chunks: u32,
    /// Worker threads (affects speed only, never results)
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 0.99)]
    level: f64,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct AnalyticsArgs {
    #[command(subcommand)]
    which: AnalyticsCommand,
}

#[derive(Subcommand)]
enum AnalyticsCommand {
    /// Exact P(M_{-r} <= p) under Clayton(r)
    ClaytonExact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        p: f64,
    },
    /// Gamma upper bound G_{1/t}(1/(p^-t - 1)); --sup maximizes over t
    ClaytonBound {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = false)]
        sup: bool,
    },
    /// The kappa multiplier and its argmax
    Kappa,
    /// Asymptotic independence threshold a_{n,p}
    ThresholdAsymptotic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Discrete lower bound p_m
    Pm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        p: f64,
    },
    /// Clayton validity thresholds t_p and u_p
    ClaytonThresholds {
        #[arg(long)]
        p: f64,
    },
}

#[derive(Args)]
struct FigureArgs {
    /// One of: gauss, clayton, tcopula, gumbel, discrete, threshold
    #[arg(long)]
    name: String,
    #[arg(long, default_value = ".")]
    out_dir: String,
    /// Replications per point (default depends on the recipe)
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    chunks: u32,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 0.99)]
    level: f64,
    /// Also emit a minimal SVG line plot
    #[arg(long, default_value_t = false)]
    svg: bool,
}

enum CliError {
    Usage(String),
    Accuracy(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Accuracy { .. } => CliError::Accuracy(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Accuracy(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}

fn init_workers(workers: Option<usize>) -> Result<(), CliError> {
    let n = workers.or_else(|| {
        std::env::var("SUBUNI_WORKERS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry: {tok:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Merge(a) => cmd_merge(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Analytics(a) => cmd_analytics(a),
        Command::Figure(a) => figures::cmd_figure(a),
    }
}

fn cmd_merge(a: MergeArgs) -> Result<(), CliError> {
    let values = parse_f64_list(&a.pvalues, "p-value")?;
    let n = values.len();
    let weights = match &a.weights {
        Some(w) => Weights::new(parse_f64_list(w, "weight")?)?,
        None => {
            if n == 0 {
                return Err(CliError::Usage("no p-values given".into()));
            }
            Weights::equal(n)
        }
    };
    let stat = match a.method.as_str() {
        "rmean" => {
            let r = a.r.ok_or_else(|| CliError::Usage("rmean requires --r".into()))?;
            MergeStatistic::rmean(r, weights)?
        }
        "simes" => MergeStatistic::Simes,
        "cauchy" => MergeStatistic::CauchyCombination { weights },
        other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
    };
    let m = merge(&stat, &PValues::new(values)?)?;
    println!("{}", sig12(m));
    Ok(())
}

fn cmd_estimate(a: EstimateArgs) -> Result<(), CliError> {
    init_workers(a.workers)?;
    let model = parse_model(&a.copula)?;
    let stat = parse_stat(&a.stat, model.dimension())?;
    let grid = parse_f64_list(&a.p, "grid")?;
    let plan = SimulationPlan::new(a.seed, a.reps)
        .with_chunks(a.chunks)
        .with_level(a.level);
    let rows = scan_subuniformity(&plan, &model, &stat, &grid)?;
    let mut out = String::from("p,estimate,stderr,ci_low,ci_high,reps,seed,verdict\n");
    for row in rows {
        let e = row.estimate;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sig12(row.p),
            sig12(e.value),
            sig12(e.stderr),
            sig12(e.ci_low),
            sig12(e.ci_high),
            e.reps,
            e.seed,
            row.verdict
        ));
    }
    write_text(a.out.as_deref(), &out)
}

fn write_text(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_analytics(a: AnalyticsArgs) -> Result<(), CliError> {
    use subuni::analytics as an;
    match a.which {
        AnalyticsCommand::ClaytonExact { n, r, p } => {
            println!("{}", sig12(an::clayton_exact_cdf(n, r, p)?));
        }
        AnalyticsCommand::ClaytonBound { t, p, sup } => {
            let v = if sup {
                an::clayton_sup_bound(p)?
            } else {
                let t = t.ok_or_else(|| {
                    CliError::Usage("clayton-bound requires --t (or --sup)".into())
                })?;
                an::clayton_gamma_bound(t, p)?
            };
            println!("{}", sig12(v));
        }
        AnalyticsCommand::Kappa => {
            let k = an::kappa_constant();
            println!("kappa = {}", sig12(k.kappa));
            println!("p_star = {}", sig12(k.p_star));
            println!("b_star = {}", sig12(k.b_star));
        }
        AnalyticsCommand::ThresholdAsymptotic { n, p } => {
            println!("{}", sig12(an::asymptotic_threshold(n, p)?));
        }
        AnalyticsCommand::Pm { n, m, r, p } => {
            println!("{}", sig12(an::discrete_pm(n, m, r, p)?));
        }
        AnalyticsCommand::ClaytonThresholds { p } => {
            println!("t_p = {}", sig12(an::clayton_threshold(p)?));
            if p <= 0.1 {
                println!("u_p = {}", sig12(an::clayton_threshold_kappa(p)?));
            }
        }
    }
    Ok(())
}
