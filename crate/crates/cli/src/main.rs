//! `tgp`: generate terrains, discretize, solve, verify, export and plot.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input or infeasible,
//! 3 time limit reached without an optimality proof. Failures print a single
//! line `E_<KIND>: message` on standard error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use tgp_core::io::{self, Discretization, Profile, SolutionFile};
use tgp_core::{
    build_candidates, build_instance, build_witnesses, solve_exact, solve_greedy,
    solve_local_search, verify_coverage, Error, ExactOptions, Method, SetCoverInstance, Terrain,
};

#[derive(Parser)]
#[command(
    name = "tgp",
    version,
    about = "Exact terrain guarding via discretization and set cover"
)]
struct Cli {
    /// Worker threads for visibility computations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a deterministic random terrain.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// random-walk, valleys or convex.
        #[arg(long, default_value = "random-walk")]
        profile: Profile,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the guard candidates and witnesses of a terrain.
    Discretize {
        terrain: PathBuf,
        /// Keep a witness on every feature, not only inclusion-minimal ones.
        #[arg(long)]
        no_min_filter: bool,
        #[arg(long)]
        guards_out: PathBuf,
        #[arg(long)]
        witnesses_out: PathBuf,
    },
    /// Compute a guard cover.
    Solve {
        terrain: PathBuf,
        /// exact, greedy or local-search.
        #[arg(long, default_value = "exact")]
        method: Method,
        /// Swap size for local search.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        swap_size: u32,
        /// Seconds before the exact solver returns its incumbent.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        no_min_filter: bool,
        /// Store the wall-clock solve time in the solution file.
        #[arg(long)]
        record_timing: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check that a solution covers a terrain.
    Verify { terrain: PathBuf, solution: PathBuf },
    /// Write the covering program in LP format.
    ExportIp {
        terrain: PathBuf,
        #[arg(long)]
        no_min_filter: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Render a terrain, optionally with a solution, as SVG.
    Plot {
        terrain: PathBuf,
        solution: Option<PathBuf>,
        /// Also mark guard candidates and witnesses.
        #[arg(long)]
        discretization: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Parse(String),
    Invalid(String),
    Infeasible(String),
    Timeout(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Timeout(_) => 3,
            _ => 2,
        }
    }

    fn line(&self) -> String {
        let (tag, msg) = match self {
            Failure::Usage(m) => ("E_USAGE", m),
            Failure::Io(m) => ("E_IO", m),
            Failure::Parse(m) => ("E_PARSE", m),
            Failure::Invalid(m) => ("E_INVALID", m),
            Failure::Infeasible(m) => ("E_INFEASIBLE", m),
            Failure::Timeout(m) => ("E_TIMEOUT", m),
            Failure::Internal(m) => ("E_INTERNAL", m),
        };
        format!("{tag}: {}", msg.replace('\n', " "))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_) | Error::Json(_) => Failure::Parse(msg),
            Error::TooFewVertices(_)
            | Error::NonMonotone { .. }
            | Error::OutOfRange(_)
            | Error::NotOnTerrain(_) => Failure::Invalid(msg),
            Error::Uncovered { .. } | Error::InfeasibleWitness { .. } => Failure::Infeasible(msg),
            Error::TooLarge { .. } | Error::AlreadyCandidate(_) | Error::Invariant(_) => {
                Failure::Internal(msg)
            }
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_terrain(path: &Path) -> CliResult<Terrain> {
    Ok(io::parse_terrain(&read(path)?)?)
}

fn instance(t: &Terrain, min_filter: bool) -> CliResult<SetCoverInstance> {
    let u = build_candidates(t);
    let w = build_witnesses(t, &u, min_filter)?;
    Ok(build_instance(t, &u, &w)?)
}

fn run(cli: Cli) -> CliResult {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    match cli.command {
        Command::Generate {
            n,
            seed,
            profile,
            output,
        } => {
            let t = io::generate(n, seed, profile)?;
            write(&output, &io::write_terrain(&t))
        }
        Command::Discretize {
            terrain,
            no_min_filter,
            guards_out,
            witnesses_out,
        } => {
            let t = load_terrain(&terrain)?;
            let u = build_candidates(&t);
            let w = build_witnesses(&t, &u, !no_min_filter)?;
            write(&guards_out, &io::write_candidates(&u))?;
            write(&witnesses_out, &io::write_witnesses(&w, !no_min_filter))
        }
        Command::Solve {
            terrain,
            method,
            swap_size,
            time_limit,
            no_min_filter,
            record_timing,
            output,
        } => {
            let time_limit = match time_limit {
                Some(s) if !(s >= 0.0 && s.is_finite()) => {
                    return Err(Failure::Usage(format!("invalid time limit {s}")))
                }
                Some(s) => Some(Duration::from_secs_f64(s)),
                None => None,
            };
            let t = load_terrain(&terrain)?;
            let start = Instant::now();
            let inst = instance(&t, !no_min_filter)?;
            let sol = match method {
                Method::Exact => solve_exact(
                    inst.incidence(),
                    &ExactOptions {
                        time_limit,
                        ..ExactOptions::default()
                    },
                ),
                Method::Greedy => solve_greedy(inst.incidence()),
                Method::LocalSearch => {
                    solve_local_search(inst.incidence(), swap_size as usize, None)
                }
            };
            let timing = record_timing.then(|| start.elapsed().as_millis() as u64);
            let file = SolutionFile::new(&sol, &inst.points(&sol), timing);
            write(&output, &file.to_text())?;
            if method == Method::Exact && !sol.optimal {
                return Err(Failure::Timeout(format!(
                    "time limit reached; wrote {} guards, lower bound {}",
                    sol.cardinality(),
                    sol.lower_bound.unwrap_or(0)
                )));
            }
            Ok(())
        }
        Command::Verify { terrain, solution } => {
            let t = load_terrain(&terrain)?;
            let s = io::parse_solution(&read(&solution)?)?;
            let guards = s.guard_points(&t)?;
            let c = verify_coverage(&t, &guards);
            match c.uncovered_at {
                None => {
                    println!("ok: {} guards cover the terrain", guards.len());
                    Ok(())
                }
                Some(p) => Err(Failure::Infeasible(format!(
                    "point {p} is seen by no guard"
                ))),
            }
        }
        Command::ExportIp {
            terrain,
            no_min_filter,
            output,
        } => {
            let t = load_terrain(&terrain)?;
            let inst = instance(&t, !no_min_filter)?;
            write(&output, &io::export_ip(inst.incidence()))
        }
        Command::Plot {
            terrain,
            solution,
            discretization,
            output,
        } => {
            let t = load_terrain(&terrain)?;
            let guards = match solution {
                Some(p) => Some(io::parse_solution(&read(&p)?)?.guard_points(&t)?),
                None => None,
            };
            let svg = if discretization {
                let u = build_candidates(&t);
                let w = build_witnesses(&t, &u, true)?;
                let d = Discretization {
                    candidates: &u,
                    witnesses: &w,
                };
                io::plot_svg(&t, guards.as_deref(), Some(&d))
            } else {
                io::plot_svg(&t, guards.as_deref(), None)
            };
            write(&output, &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("{}", Failure::Usage(first.to_string()).line());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(f.code())
        }
    }
}
