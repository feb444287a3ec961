use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltahom_cli::catalog::{find, CATALOG};
use deltahom_cli::{run, CliError, Kind, Scenario};

#[derive(Parser)]
#[command(name = "deltahom", version, about = "Delta-well beam splitter and two-particle interference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// One packet: norms, P_R(tau), transmission table, density frames.
    Single(RunArgs),
    /// Two packets: same-side probabilities, quadrants, joint densities, separations.
    Two(RunArgs),
    /// Cartesian sweep over well depth, second packet and spin overlap.
    Sweep(RunArgs),
    /// Joint-density frames plus a manifest, for animation.
    Frames(RunArgs),
    /// Run named figure scenarios.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approximate,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Exact => "exact",
            ModeArg::Approximate => "approximate",
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the mode in the config file.
    #[arg(long)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct CatalogArgs {
    /// Scenario names; all of them when empty.
    names: Vec<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    mode: Option<ModeArg>,
    /// Print the available names and exit.
    #[arg(long)]
    list: bool,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let kind = match &cli.command {
        Command::Single(_) => Kind::Single,
        Command::Two(_) => Kind::Two,
        Command::Sweep(_) => Kind::Sweep,
        Command::Frames(_) => Kind::Frames,
        Command::Catalog(c) => {
            if c.list {
                for e in CATALOG {
                    println!("{}", e.name);
                }
                return Ok(());
            }
            let names: Vec<&str> = if c.names.is_empty() {
                CATALOG.iter().map(|e| e.name).collect()
            } else {
                c.names.iter().map(String::as_str).collect()
            };
            for name in names {
                let files = find(name)?.run(&c.out, c.mode.map(ModeArg::name))?;
                eprintln!("{name}: {} files", files.len());
            }
            return Ok(());
        }
    };
    let (Command::Single(a) | Command::Two(a) | Command::Sweep(a) | Command::Frames(a)) = &cli.command else {
        unreachable!()
    };
    let mut sc = Scenario::load(&a.config)?;
    if let Some(m) = a.mode {
        sc.mode = m.name().to_string();
    }
    let files = run(kind, &sc, &a.out)?;
    eprintln!("{}: {} files in {}", sc.name, files.len(), a.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| execute(cli)),
        Err(e) => Err(CliError::Config(format!("thread pool: {e}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
