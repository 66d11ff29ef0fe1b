//! The `gammalab` command line: argument parsing, configuration layering,
//! the field cache and report rendering around `gammalab-core`.

pub mod cache;
pub mod commands;
pub mod config;
pub mod descriptor;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cache::{Cache, CacheError};
use crate::config::{Format, Overrides, RunConfig};
use crate::verify::Suite;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  internal error
  2  usage error, unknown descriptor syntax or invalid field input
  3  a configured cap was exceeded
  4  a verification found a counterexample (always a bug)
  5  a corrupt cache entry could not be removed";

#[derive(Debug)]
pub enum RunError {
    Core(gammalab_core::Error),
    Cache(CacheError),
    Usage(String),
    /// The report was produced but lists failures.
    Failures(usize),
}

impl From<gammalab_core::Error> for RunError {
    fn from(e: gammalab_core::Error) -> Self {
        RunError::Core(e)
    }
}

impl From<CacheError> for RunError {
    fn from(e: CacheError) -> Self {
        RunError::Cache(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Cache(e) => write!(f, "{e}"),
            RunError::Usage(e) => write!(f, "{e}"),
            RunError::Failures(n) => write!(f, "{n} failure(s) reported"),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        use gammalab_core::Error as E;
        match self {
            RunError::Usage(_) => 2,
            RunError::Core(E::CapExceeded { .. }) => 3,
            RunError::Core(
                E::InvalidInput(_) | E::Reducible | E::NotInTower(_) | E::NotSubfield(_),
            ) => 2,
            RunError::Core(_) => 1,
            RunError::Failures(_) => 4,
            RunError::Cache(CacheError::Corrupt(..)) => 5,
            RunError::Cache(CacheError::Io(_)) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gammalab", version, about = "Discriminant growth of number fields, exactly", after_help = EXIT_CODES)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML file with run settings
    #[arg(long, global = true, env = "GAMMALAB_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Omit the timestamp so identical runs give identical bytes
    #[arg(long, global = true)]
    deterministic: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Ignore any configured cache directory
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true)]
    degree_cap: Option<usize>,
    /// Largest number of intermediate fields to enumerate
    #[arg(long, global = true)]
    subgroup_cap: Option<u64>,
    /// Largest tower size a scan accepts (at most 12)
    #[arg(long, global = true)]
    subset_cap: Option<usize>,
    /// Primes used by the splitting screen
    #[arg(long, global = true)]
    screen_size: Option<usize>,
    /// Largest accepted width of a height enclosure
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Largest number of polynomials a census may visit
    #[arg(long, global = true)]
    work_cap: Option<u64>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            degree_cap: self.degree_cap,
            subgroup_cap: self.subgroup_cap,
            subset_cap: self.subset_cap,
            screen_size: self.screen_size,
            tolerance: self.tolerance,
            work_cap: self.work_cap,
            seed: self.seed,
            format: self.format,
            cache_dir: self.cache_dir.clone(),
            threads: self.threads,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Data of a single field
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// γ_M(F), exactly
    Gamma {
        #[arg(long = "M")]
        m: String,
        #[arg(long = "F")]
        f: String,
    },
    /// γ'(M/K) with every intermediate field
    GammaPrime {
        #[arg(long = "M")]
        m: String,
        #[arg(long = "K", default_value = "Q")]
        k: String,
        /// Also check a sample of fields outside M
        #[arg(long)]
        external: bool,
    },
    /// The tower of cyclic stages
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// Seeded property suites
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Weil heights of algebraic numbers
    Heights {
        #[command(subcommand)]
        cmd: HeightsCmd,
    },
    /// The on-disk field cache
    Cache {
        #[command(subcommand)]
        cmd: CacheCmd,
    },
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    /// Degree, conductor or polynomial, and factored discriminant
    Info { descriptor: String },
}

#[derive(Subcommand, Debug)]
enum TowerCmd {
    /// The first n stages
    Build {
        #[arg(long)]
        stages: usize,
    },
    /// γ' over every compositum of stages containing the base
    Scan {
        #[arg(long)]
        stages: usize,
        #[arg(long, default_value = "Q")]
        base: String,
        /// Include every intermediate field of every compositum
        #[arg(long)]
        full: bool,
    },
}

#[derive(Subcommand, Debug)]
enum HeightsCmd {
    /// All algebraic numbers of exact degree d and height below B
    Enumerate {
        #[arg(long)]
        degree: usize,
        /// `log(r)` for an exact bound, or a decimal
        #[arg(long)]
        bound: String,
    },
    /// Smallest height of L \ Q below B, for L of prime degree
    Probe {
        #[arg(long)]
        field: String,
        #[arg(long)]
        bound: String,
    },
}

#[derive(Subcommand, Debug)]
enum CacheCmd {
    /// Recompute every entry and compare
    Audit {
        /// Fill the cache with a small corpus first
        #[arg(long)]
        populate: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Field { .. } => "field info",
            Command::Gamma { .. } => "gamma",
            Command::GammaPrime { .. } => "gamma-prime",
            Command::Tower {
                cmd: TowerCmd::Build { .. },
            } => "tower build",
            Command::Tower {
                cmd: TowerCmd::Scan { .. },
            } => "tower scan",
            Command::Verify { .. } => "verify",
            Command::Heights {
                cmd: HeightsCmd::Enumerate { .. },
            } => "heights enumerate",
            Command::Heights {
                cmd: HeightsCmd::Probe { .. },
            } => "heights probe",
            Command::Cache { .. } => "cache audit",
        }
    }
}

fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, RunError> {
    let env = Overrides::from_env(|k| std::env::var(k).ok()).map_err(RunError::Usage)?;
    let file = g
        .config
        .as_deref()
        .map(Overrides::from_toml_file)
        .transpose()
        .map_err(RunError::Usage)?;
    let mut cfg =
        RunConfig::resolve(&env, file.as_ref(), &g.overrides()).map_err(RunError::Usage)?;
    if g.no_cache {
        cfg.cache_dir = None;
    }
    Ok(cfg)
}

fn dispatch(
    cmd: &Command,
    cfg: &RunConfig,
    cache: Option<&mut Cache>,
) -> Result<report::Output, RunError> {
    match cmd {
        Command::Field {
            cmd: FieldCmd::Info { descriptor },
        } => commands::field_info(cfg, cache, descriptor),
        Command::Gamma { m, f } => commands::gamma(cfg, m, f),
        Command::GammaPrime { m, k, external } => commands::gamma_prime(cfg, m, k, *external),
        Command::Tower {
            cmd: TowerCmd::Build { stages },
        } => commands::tower_build(*stages),
        Command::Tower {
            cmd: TowerCmd::Scan { stages, base, full },
        } => commands::tower_scan(cfg, *stages, base, *full),
        Command::Verify { suite, trials } => commands::verify(cfg, *suite, *trials),
        Command::Heights {
            cmd: HeightsCmd::Enumerate { degree, bound },
        } => commands::heights_enumerate(cfg, *degree, bound),
        Command::Heights {
            cmd: HeightsCmd::Probe { field, bound },
        } => commands::heights_probe(cfg, field, bound),
        Command::Cache {
            cmd: CacheCmd::Audit { populate },
        } => commands::cache_audit(cfg, cache, *populate),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), RunError> {
    let cfg = resolve_config(&cli.global)?;
    if let Some(n) = cfg.threads {
        // a pool may already exist when called more than once in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let mut cache = cfg.cache_dir.as_deref().map(Cache::open).transpose()?;
    let result = dispatch(&cli.command, &cfg, cache.as_mut());
    if let Some(c) = &cache {
        for w in &c.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
    }
    let output = result?;
    let text = report::render(
        cli.command.name(),
        &cfg.digest(),
        cli.global.deterministic,
        cfg.format,
        &output,
    );
    out.write_all(text.as_bytes())
        .map_err(|e| RunError::Usage(format!("cannot write output: {e}")))?;
    if output.failures.is_empty() {
        Ok(())
    } else {
        Err(RunError::Failures(output.failures.len()))
    }
}

/// Runs the command line with explicit output streams and returns the exit
/// code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return e.exit_code();
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
