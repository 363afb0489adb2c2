//! `circle-breaks`: command-line front end for the break-point toolkit.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use circle_breaks::circle::{JUMP_TOL, POINT_TOL, REDUCE_TOL};
use circle_breaks::jumps::DEFAULT_N_MAX;
use circle_breaks::Tolerances;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "circle-breaks",
    version,
    about = "Break points, jump invariants and piecewise conjugators of circle maps"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Two points closer than this are identified
    #[arg(long, global = true, default_value_t = POINT_TOL)]
    tol_point: f64,
    /// A jump s counts as a break when |s - 1| exceeds this
    #[arg(long, global = true, default_value_t = JUMP_TOL)]
    tol_jump: f64,
    /// Residual bound for reductions
    #[arg(long, global = true, default_value_t = REDUCE_TOL)]
    tol_reduce: f64,
    /// Iterates searched when matching breaks into orbits
    #[arg(long, global = true, default_value_t = DEFAULT_N_MAX)]
    n_max: usize,
    /// Directory for report files (created if missing)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary
    #[arg(long, global = true)]
    json: bool,
}

impl Common {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            point: self.tol_point,
            jump: self.tol_jump,
            reduce: self.tol_reduce,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyArg {
    Auto,
    Pl,
    Pq,
    Pe,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Breaks, connections, invariants and a rotation-number estimate
    Analyze {
        input: PathBuf,
        /// Iterations for the rotation-number estimate
        #[arg(long, visible_alias = "rotnum-iters", default_value_t = 100_000)]
        iters: u64,
    },
    /// Build a conjugator moving every break to a prescribed orbit slot
    Reduce {
        input: PathBuf,
        /// Comma-separated shifts, one per connection (default all 0)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value_t = FamilyArg::Auto)]
        family: FamilyArg,
        /// Conjugate to a map without breaks; refuses maps failing the orbit condition
        #[arg(long)]
        to_diffeo: bool,
        /// With --to-diffeo, use a conjugator with a fixed point
        #[arg(long, requires = "to_diffeo")]
        normalize: bool,
        /// Use the direct conjugator for maps with exactly two breaks b, f(b)
        #[arg(long, conflicts_with_all = ["to_diffeo", "k"])]
        two_break: bool,
        /// Iterations for rotation-number estimates in --two-break mode
        #[arg(long, visible_alias = "rotnum-iters", default_value_t = 1_000_000)]
        iters: u64,
    },
    /// Check a (map, conjugator, reduced map) triple
    Verify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        conjugator: PathBuf,
        #[arg(long)]
        reduced: PathBuf,
        /// Shifts the reduced map is expected to honor (default all 0)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Option<Vec<i64>>,
    },
    /// Rotation-number estimate with continued fraction
    Rotnum {
        input: PathBuf,
        #[arg(long, visible_alias = "rotnum-iters", default_value_t = 1_000_000)]
        iters: u64,
        /// Base point of the orbit
        #[arg(long, default_value_t = 0.0)]
        base: f64,
    },
    /// Break counts of the iterates f^n
    Growth {
        input: PathBuf,
        /// Largest iterate (at most 64)
        #[arg(long, default_value_t = 32)]
        iterates: usize,
    },
    /// Orbit histogram and its top-decile mass
    Measure {
        input: PathBuf,
        /// Number of binned orbit points
        #[arg(long, default_value_t = 1_000_000)]
        iters: usize,
        #[arg(long, default_value_t = 100)]
        bins: usize,
        /// Draw the start point from this seed instead of using 0.173
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a bundled map as a map-spec file
    Sample {
        /// Instance name; omit to list the available names
        name: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> Result<i32, commands::CliError> {
    let c = &cli.common;
    c.tolerances()
        .validate()
        .map_err(commands::CliError::usage)?;
    match cli.command {
        Command::Analyze { input, iters } => commands::analyze(c, &input, iters),
        Command::Reduce {
            input,
            k,
            family,
            to_diffeo,
            normalize,
            two_break,
            iters,
        } => commands::reduce(
            c,
            &input,
            commands::ReduceMode {
                k,
                family,
                to_diffeo,
                normalize,
                two_break,
                iters,
            },
        ),
        Command::Verify {
            map,
            conjugator,
            reduced,
            k,
        } => commands::verify(c, &map, &conjugator, &reduced, k),
        Command::Rotnum { input, iters, base } => commands::rotnum(c, &input, iters, base),
        Command::Growth { input, iterates } => commands::growth(c, &input, iterates),
        Command::Measure {
            input,
            iters,
            bins,
            seed,
        } => commands::measure(c, &input, iters, bins, seed),
        Command::Sample { name } => commands::sample(c, name.as_deref()),
    }
}
