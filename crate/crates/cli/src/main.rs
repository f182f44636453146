use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use matpi::lemmas::SuiteConfig;
use matpi::{Mode, RingSpec};
use matpi_cli::commands::{self, CliError, Input};

/// Exact polynomial-identity checks for subalgebras of matrix algebras.
#[derive(Parser)]
#[command(name = "matpi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    out: Output,

    /// Worker threads for the identity sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include wall time in structured output.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeFlag {
    Exhaustive,
    Randomized,
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeFlag::Exhaustive)]
    mode: ModeFlag,
    /// Random tuples in randomized mode.
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeFlag::Exhaustive => Mode::Exhaustive,
            ModeFlag::Randomized => Mode::Randomized {
                trials: self.trials,
                seed: self.seed,
            },
        }
    }
}

/// Either a spec file or the full matrix algebra M_n.
#[derive(Args)]
struct InputArgs {
    #[arg(long, required_unless_present = "n", conflicts_with_all = ["n", "ring"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// gf:P, q, or mod:M (default gf:101).
    #[arg(long)]
    ring: Option<RingSpec>,
}

#[derive(Subcommand)]
enum Command {
    /// s_2n on M_n, the failures of s_{2n-2} and s_{2n-1}, and the staircase value.
    VerifyAl {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gf:101")]
        ring: RingSpec,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Classify a spec's algebra by its shape and cross-check against s_{2n-2}.
    Classify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Smallest t with s_t an identity.
    MinDegree {
        #[command(flatten)]
        input: InputArgs,
        /// Largest degree to test (default 2n).
        #[arg(long)]
        t_max: Option<usize>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Space of multilinear identities of one degree.
    IdentitySpace {
        #[command(flatten)]
        input: InputArgs,
        /// Degree (default 2n).
        #[arg(long)]
        t: Option<usize>,
    },
    /// Seeded checks of the block-structure lemmas and the Z/4 witness search.
    LemmaSuite {
        #[arg(long, default_value = "gf:101")]
        ring: RingSpec,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random tuples per block assembly check.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Throughput of the naive and subset-DP evaluators.
    Bench {
        #[arg(long, default_value = "gf:101")]
        ring: RingSpec,
        /// Matrix size.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8])]
        t: Vec<usize>,
        /// Measuring time per row.
        #[arg(long, default_value_t = 200)]
        millis: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn read_spec(path: &Path) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(Input::Spec {
        label: path.display().to_string(),
        text,
    })
}

fn input(args: &InputArgs) -> Result<Input, CliError> {
    match (&args.spec, args.n) {
        (Some(path), _) => read_spec(path),
        (None, Some(n)) => Ok(Input::Full {
            n,
            ring: args.ring.unwrap_or_else(|| RingSpec::prime_field(101).expect("101 is prime")),
        }),
        (None, None) => Err(CliError::Usage("pass --spec or --n".into())),
    }
}

fn run(cli: &Cli) -> Result<matpi_cli::RunReport, CliError> {
    match &cli.command {
        Command::VerifyAl { n, ring, mode } => commands::verify_al(*n, *ring, mode.mode()),
        Command::Classify { spec } => match read_spec(spec)? {
            Input::Spec { label, text } => commands::classify_spec(&label, &text),
            Input::Full { .. } => unreachable!("read_spec returns a spec"),
        },
        Command::MinDegree { input: i, t_max, mode } => commands::min_degree(&input(i)?, *t_max, mode.mode()),
        Command::IdentitySpace { input: i, t } => commands::identity_space(&input(i)?, *t),
        Command::LemmaSuite { ring, seed, trials } => {
            let mut config = SuiteConfig {
                seed: *seed,
                ..SuiteConfig::default()
            };
            if let Some(t) = trials {
                config.blocks_trials = *t;
            }
            commands::lemma_suite(*ring, config)
        }
        Command::Bench { ring, n, t, millis, seed } => {
            commands::bench(*ring, *n, t, Duration::from_millis(*millis), *seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let mut report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let elapsed = start.elapsed();
    match cli.out {
        Output::Text => print!("{}", report.render_text(elapsed)),
        Output::Structured => {
            if cli.timings {
                report.wall_time_us = Some(elapsed.as_micros() as u64);
            }
            print!("{}", report.to_json());
        }
    }
    ExitCode::from(if report.consistent { 0 } else { 2 })
}
