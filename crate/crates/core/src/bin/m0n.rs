use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use m0n::cache::Cache;
use m0n::commands::{cmd_conj, cmd_inv, cmd_manin, cmd_oracle, cmd_rep, ConjOptions, Suite};
use m0n::config::EngineConfig;
use m0n::conjectures::Side;
use m0n::emit::{render, EmitFormat};
use m0n::symfun::Basis;
use m0n::Error;

#[derive(Parser, Debug)]
#[command(name = "m0n", version, about = "Cohomology of M̄₀,ₙ as S_n-representations, computed exactly")]
struct Cli {
    /// Largest n (number of markings) to compute. Each command has its own default.
    #[arg(long, global = true, env = "M0N_CAP_N")]
    cap_n: Option<u32>,
    /// Largest t-degree to keep. Defaults to the full range for the chosen n.
    #[arg(long, global = true, env = "M0N_CAP_K")]
    cap_k: Option<u32>,
    /// Directory for cached tables. Without it nothing is cached.
    #[arg(long, global = true, env = "M0N_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "M0N_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, env = "M0N_EMIT", value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Write output here (atomically) instead of stdout.
    #[arg(long, short, global = true, env = "M0N_OUTPUT")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrintBasis {
    H,
    S,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Lc,
    Ultra,
    Pattern,
    Mult,
    Equiv,
    Asymp,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Q⁺, Q and P through the equivariant recursion (default n ≤ 8).
    Rep {
        /// Also list every term of Q⁺_N, Q_N and P_N.
        #[arg(long, value_name = "N")]
        print: Option<u32>,
        #[arg(long, value_enum, default_value_t = PrintBasis::H)]
        basis: PrintBasis,
    },
    /// Betti numbers of the quotients by S_n (default n ≤ 45).
    Inv,
    /// Cross-check Q against weighted rooted trees (default n ≤ 8, at most 12).
    Oracle,
    /// Log-concavity checks. Failures are reported, not treated as errors.
    Conj {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Series for the equivariant suite.
        #[arg(long, value_enum, default_value_t = SideArg::P)]
        side: SideArg,
        /// Only the adjacent tuples (k−1, k, k, k+1).
        #[arg(long)]
        weak: bool,
        /// Stop the equivariant suite after this many tuples per n.
        #[arg(long)]
        max_tuples: Option<usize>,
        /// Index for the ultra and asymp suites.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Values of n for the asymp suite.
        #[arg(long, value_delimiter = ',', default_value = "100,200,300")]
        n_list: Vec<u32>,
    },
    /// Manin's φ by two routes, and the Euler identity (default n ≤ 12).
    Manin,
}

fn default_n(command: &Command) -> u32 {
    match command {
        Command::Rep { .. } | Command::Oracle => 8,
        Command::Inv => 45,
        Command::Manin => 12,
        Command::Conj { .. } => 0,
    }
}

fn run(cli: Cli) -> m0n::Result<()> {
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cap_n = cli.cap_n.unwrap_or_else(|| default_n(&cli.command));
    let config = EngineConfig {
        cap_n: cap_n.max(1),
        cap_k: cli.cap_k.unwrap_or(cap_n.saturating_sub(2)),
        cache_dir: cli.cache_dir.clone(),
        workers,
        emit: match cli.emit {
            Emit::Json => EmitFormat::Json,
            Emit::Csv => EmitFormat::Csv,
            Emit::Markdown => EmitFormat::Markdown,
        },
    };
    config.validate()?;
    config.install_workers();
    let cache = config.cache_dir.as_ref().map(Cache::new);
    let cache = cache.as_ref();
    info!("config: {config:?}");

    let out = match cli.command {
        Command::Rep { print, basis } => {
            let basis = match basis {
                PrintBasis::H => Basis::H,
                PrintBasis::S => Basis::S,
            };
            cmd_rep(cache, config.caps(), print, basis)?
        }
        Command::Inv => cmd_inv(cache, config.caps())?,
        Command::Oracle => cmd_oracle(cache, config.cap_n)?,
        Command::Manin => cmd_manin(config.cap_n)?,
        Command::Conj { suite, side, weak, max_tuples, k, n_list } => {
            let suite = match suite {
                SuiteArg::Lc => Suite::Lc,
                SuiteArg::Ultra => Suite::Ultra,
                SuiteArg::Pattern => Suite::Pattern,
                SuiteArg::Mult => Suite::Mult,
                SuiteArg::Equiv => Suite::Equiv,
                SuiteArg::Asymp => Suite::Asymp,
                SuiteArg::All => Suite::All,
            };
            let opts = ConjOptions {
                n_max: cli.cap_n,
                side: match side {
                    SideArg::P => Side::P,
                    SideArg::Q => Side::Q,
                },
                strong: !weak,
                max_tuples,
                k,
                n_list,
            };
            cmd_conj(cache, suite, &opts)?
        }
    };

    let text = render(&out, config.emit)?;
    match &cli.output {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("M0N_LOG", "warn")).init();
    // Usage errors exit 1; 2 is reserved for engine inconsistencies.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_inconsistency() => {
            eprintln!("m0n: internal inconsistency: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("m0n: {e}");
            ExitCode::FAILURE
        }
    }
}
