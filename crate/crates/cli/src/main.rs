use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use entropic_cli::config::{read_config_file, Experiment, RunConfig};
use entropic_cli::{experiments, CliError};

#[derive(Parser)]
#[command(
    name = "entropic",
    version,
    about = "Entropy-fix experiments and theory checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear Fokker-Planck testbed, implicit midpoint.
    Fp(Common),
    /// Spectral Boltzmann testbed, forward Euler.
    Boltzmann(Common),
    /// Step-size study on the Fokker-Planck testbed.
    Convergence(Common),
    /// Inequality checks.
    Theory(TheoryArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m_lattice: Option<String>,
    /// Time step; fractions such as 1/512 are accepted.
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    /// on, off or both (default both).
    #[arg(long)]
    fix: Option<String>,
    /// root or cheap.
    #[arg(long)]
    fix_mode: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(flatten)]
    common: Common,
    /// Run only the named check.
    #[arg(long)]
    check: Option<String>,
    /// Seed from the clock instead of the configured seed.
    #[arg(long)]
    fresh: bool,
}

fn build_config(experiment: Experiment, args: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults(experiment);
    if let Some(path) = &args.config {
        for (k, v) in read_config_file(path)? {
            cfg.apply(&k, &v)?;
        }
    }
    let flags = [
        ("n", &args.n),
        ("m_lattice", &args.m_lattice),
        ("dt", &args.dt),
        ("t_end", &args.t_end),
        ("fix", &args.fix),
        ("fix_mode", &args.fix_mode),
        ("seed", &args.seed),
        ("out", &args.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.apply(key, v)?;
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.command {
        Command::Fp(a) => build_config(Experiment::Fp, a)?,
        Command::Boltzmann(a) => build_config(Experiment::Boltzmann, a)?,
        Command::Convergence(a) => build_config(Experiment::Convergence, a)?,
        Command::Theory(t) => {
            let mut cfg = build_config(Experiment::Theory, &t.common)?;
            if let Some(name) = &t.check {
                cfg.check = Some(name.clone());
            }
            if t.fresh {
                let nanos = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_nanos())
                    .unwrap_or(0);
                cfg.seed = nanos as u64;
                eprintln!("seed {}", cfg.seed);
            }
            cfg
        }
    };
    for path in experiments::run(&cfg)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entropic: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
