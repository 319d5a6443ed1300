//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a computation-domain error (the message
//! names the violated precondition), 2 on a usage error (clap's default).
//! File outputs are written to a temporary sibling and renamed on success, so
//! no partial file survives an error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use scalefree::numfmt::sig12;
use scalefree::{
    default_parity_grid, discontinuity_probe, fit_exponent, golden_cf, golden_ratio_conjugate,
    parity_transform, prime_ladder_walk, run_report, scan_range, sieve_pi, ultra_norm,
    NonsmoothSolution, PAdicNumber, RescalingSchedule, ReportConfig, UltrametricTree,
    DEFAULT_PROBE_STEP,
};

#[derive(Parser)]
#[command(
    name = "scalefree",
    version,
    about = "Scale-free nonarchimedean arithmetic and prime-counting error analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Count primes up to a limit with the segmented sieve.
    Sieve {
        #[arg(long)]
        limit: u64,
        /// Worker threads for the sieve (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Scan the prime-counting relative error over a log grid (CSV).
    PntScan {
        #[arg(long)]
        x_min: f64,
        #[arg(long)]
        x_max: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Fit the error-decay exponent over a window (JSON).
    Fit {
        #[arg(long)]
        x_min: f64,
        #[arg(long)]
        x_max: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Iterate a rescaling schedule and summarize the nonsmooth solution.
    Ode {
        /// Starting offset eta0 in [0, 1).
        #[arg(long)]
        eta: f64,
        /// Per-level alphas (comma separated; default: all 1).
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        /// Per-level epsilons (comma separated; default: all 0).
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 16)]
        levels: usize,
        /// Write the iteration trace CSV to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Iterate the unit continued fraction toward the golden ratio conjugate.
    Golden {
        #[arg(long, default_value_t = 40)]
        iters: usize,
    },
    /// Walk the prime ladder up to x and report the inversion count.
    Ladder {
        #[arg(long)]
        x_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonicalize a p-adic number and print its invariants.
    Padic {
        #[arg(long)]
        prime: u64,
        /// Digits, least significant first (comma separated).
        #[arg(long, value_delimiter = ',')]
        digits: Vec<u64>,
    },
    /// Extended norm of a real number at a scale.
    Norm {
        value: f64,
        /// The scale delta in (0, 1).
        #[arg(long)]
        delta: f64,
        /// Largeness threshold (default: 1/delta).
        #[arg(long)]
        cap: Option<f64>,
    },
    /// Build the ultrametric ball tree of a point set (DOT or JSON).
    Tree {
        #[arg(long)]
        prime: u64,
        /// One digit vector per point (repeatable, comma separated).
        #[arg(long, required = true)]
        digits: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline and write a JSON verdict.
    Report {
        #[arg(long, default_value_t = 1e3)]
        x_min: f64,
        #[arg(long, default_value_t = 1e8)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Sieve { limit, threads } => with_threads(threads, || {
            let table = sieve_pi(limit)?;
            println!("pi({limit}) = {}", table.pi_limit());
            Ok(())
        }),
        Command::PntScan {
            x_min,
            x_max,
            points,
            out,
            threads,
        } => with_threads(threads, || {
            let scan = scan_range(x_min, x_max, points)?;
            emit(out.as_deref(), scan.to_csv())
        }),
        Command::Fit {
            x_min,
            x_max,
            points,
            out,
            threads,
        } => with_threads(threads, || {
            let scan = scan_range(x_min, x_max, points)?;
            let fit = fit_exponent(&scan, x_min, x_max)?;
            emit(out.as_deref(), format!("{}\n", fit.to_json()))
        }),
        Command::Ode {
            eta,
            alpha,
            eps,
            levels,
            trace,
        } => {
            // Unlisted deeper levels are trivial (alpha 1, eps 0).
            let mut alphas = alpha;
            alphas.resize(alphas.len().max(levels), 1.0);
            let mut epsilons = eps;
            epsilons.resize(epsilons.len().max(levels), 0.0);
            let schedule = RescalingSchedule::new(eta, alphas, epsilons, levels)?;
            let run = schedule.iterate()?;
            println!("levels = {levels}, eta0 = {}", sig12(eta));
            println!("final product = {}", sig12(run.final_product()));
            println!("left value    = {}", sig12(run.left_value()));
            println!("constant C    = {}", sig12(run.constant()));
            let parity = parity_transform(&run, &default_parity_grid())?;
            println!("parity deviation (eta in [0.01, 0.1]) = {}", sig12(parity.max_deviation));
            let solution = NonsmoothSolution::from_schedule(&schedule)?;
            let probe = discontinuity_probe(&solution, 2, DEFAULT_PROBE_STEP)?;
            println!(
                "order-2 jump at t = 1: {} (noise floor {})",
                sig12(probe.jump),
                sig12(probe.noise_floor)
            );
            if let Some(path) = trace {
                write_atomic(&path, run.to_csv().as_bytes())?;
                println!("trace written to {}", path.display());
            }
            Ok(())
        }
        Command::Golden { iters } => {
            let cf = golden_cf(iters)?;
            let nu = golden_ratio_conjugate();
            println!("value after {iters} iterations = {}", sig12(cf.value));
            println!("golden ratio conjugate        = {}", sig12(nu));
            println!("absolute error                = {}", sig12((cf.value - nu).abs()));
            if let Some(last) = cf.error_ratios.iter().rev().find(|r| r.is_finite()) {
                println!("latest error ratio            = {} (nu^2 = {})", sig12(*last), sig12(nu * nu));
            }
            Ok(())
        }
        Command::Ladder { x_max, out } => {
            let walk = prime_ladder_walk(x_max)?;
            let check = sieve_pi(x_max.floor() as u64)?.pi_limit();
            println!(
                "inversions up to {x_max} = {} (sieve pi = {check}, consistent: {})",
                walk.inversion_count,
                walk.inversion_count == check
            );
            println!("cf exponent = {}", sig12(walk.cf_exponent));
            if let Some(path) = out {
                write_atomic(&path, walk.to_csv().as_bytes())?;
                println!("trajectory written to {}", path.display());
            }
            Ok(())
        }
        Command::Padic { prime, digits } => {
            let value = PAdicNumber::from_digits(prime, 0, &digits)?;
            match value.valuation() {
                Some(r) => {
                    let lead: Vec<String> = value
                        .digits()
                        .iter()
                        .take(8)
                        .map(|d| d.to_string())
                        .collect();
                    println!("canonical: p = {prime}, r = {r}, digits = [{}, ...]", lead.join(", "));
                    println!("|x|_{prime} = {}", value.abs());
                    println!("real embedding = {}", sig12(value.monna()?));
                }
                None => println!("canonical: zero (r = +inf)"),
            }
            Ok(())
        }
        Command::Norm { value, delta, cap } => {
            let big_n = cap.unwrap_or(1.0 / delta);
            let scalar = ultra_norm(value, delta, big_n)?;
            println!("{}", scalar.to_json());
            Ok(())
        }
        Command::Tree {
            prime,
            digits,
            format,
            out,
        } => {
            let mut digit_lists = Vec::with_capacity(digits.len());
            for list in &digits {
                let parsed: Result<Vec<u64>, _> =
                    list.split(',').map(|d| d.trim().parse::<u64>()).collect();
                digit_lists.push(parsed.map_err(|e| format!("bad digit list '{list}': {e}"))?);
            }
            let precision = digit_lists.iter().map(|l| l.len()).max().unwrap_or(1).max(1);
            let points: Result<Vec<PAdicNumber>, scalefree::Error> = digit_lists
                .iter()
                .map(|list| PAdicNumber::with_precision(prime, 0, list, precision))
                .collect();
            let tree = UltrametricTree::build(&points?)?;
            let rendered = match format {
                Format::Dot => tree.to_dot(),
                Format::Json => format!("{}\n", tree.to_json()),
                Format::Csv => return Err("tree output supports dot or json".into()),
            };
            emit(out.as_deref(), rendered)
        }
        Command::Report {
            x_min,
            x_max,
            points,
            out,
            threads,
        } => with_threads(threads, || {
            let report = run_report(&ReportConfig {
                x_min,
                x_max,
                points,
                ..ReportConfig::default()
            })?;
            emit(out.as_deref(), format!("{}\n", report.to_json()))
        }),
    }
}

/// Run `f` inside a rayon pool of the requested size (checked up front).
fn with_threads<F>(threads: Option<usize>, f: F) -> Result<(), Box<dyn std::error::Error>>
where
    F: FnOnce() -> Result<(), Box<dyn std::error::Error>> + Send,
{
    match threads {
        None => f(),
        Some(0) => Err("thread count must be at least 1".into()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(|| f().map_err(|e| e.to_string()))
                .map_err(|e| e.into())
        }
    }
}

/// Print to stdout or atomically write to a file.
fn emit(out: Option<&Path>, content: String) -> Result<(), Box<dyn std::error::Error>> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            write_atomic(path, content.as_bytes())?;
            Ok(())
        }
    }
}

/// Write to a temporary sibling and rename into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}
