use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use orbitzeta_cli::{run_command, write_report, AlgebraFile, CliError, Command, Format, Options, CHECK_FAILED};
use orbitzeta_core::Limits;

/// Character-degree counts, zeta series and coadjoint-orbit checks for uniform
/// pro-p groups given by a Z_p-Lie lattice.
///
/// Exit codes: 0 success, 1 invalid algebra file, 2 algebra not perfect where
/// exact counts are required, 3 resource cap, 4 orbit-method hypothesis
/// violated (p = 3 needs u >= 2, p >= 5 needs u >= 1), 5 a verification or
/// cross-check failed, 64 usage error, 74 I/O error.
#[derive(Parser, Debug)]
#[command(name = "orbitzeta", version)]
struct Cli {
    command: Command,

    /// JSON algebra file.
    algebra: PathBuf,

    /// Largest degree exponent i (default: 3 for lambda, 5 for zeta-fit, 2 for twisted).
    #[arg(long)]
    imax: Option<u32>,

    /// Working level k: the quotient L/p^k L for kirillov-verify, the largest
    /// level for equivariant (default 2), the cell level for integral-check and
    /// measure-check (default 3), and the truncation level for lambda on
    /// non-perfect algebras.
    #[arg(long)]
    level: Option<u32>,

    /// Name of an element listed in the algebra file (twisted).
    #[arg(long)]
    element: Option<String>,

    /// Sample count for kirillov-verify (default 1000) and measure-check (default 20).
    #[arg(long)]
    samples: Option<usize>,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: one per core).
    #[arg(long, env = "ORBITZETA_THREADS")]
    threads: Option<usize>,

    /// Directory for cached per-level counts.
    #[arg(long, env = "ORBITZETA_CACHE", default_value = orbitzeta_cli::cache::DEFAULT_DIR)]
    cache: PathBuf,

    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot set up {t} threads: {e}");
            return ExitCode::from(64);
        }
    }
    let started = Instant::now();
    let outcome = AlgebraFile::from_path(&cli.algebra)
        .map_err(CliError::from)
        .and_then(|file| {
            let opts = Options {
                imax: cli.imax,
                level: cli.level,
                element: cli.element.clone(),
                samples: cli.samples,
                seed: cli.seed,
                cache_dir: (!cli.no_cache).then(|| cli.cache.clone()),
                limits: Limits::default(),
            };
            run_command(cli.command, &file, &opts)
        });
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    match outcome {
        Ok(report) => {
            let bytes = write_report(&report, cli.format);
            if let Err(e) = std::io::stdout().write_all(&bytes) {
                eprintln!("error: {e}");
                return ExitCode::from(74);
            }
            if report.passed == Some(false) {
                eprintln!("error: verification failed");
                return ExitCode::from(CHECK_FAILED as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
