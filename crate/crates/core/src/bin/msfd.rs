use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shepard_collocation::experiment::{build_reference, run_experiment, ExperimentConfig};
use shepard_collocation::{Result, Scheme};

#[derive(Parser)]
#[command(name = "msfd", version, about = "Multinode Shepard collocation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve, measure errors against the reference and write all tables.
    Run(Common),
    /// Write the node set only.
    Nodes(Common),
    /// Compute the finite-difference reference and write its final slice.
    Reference(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment configuration.
    config: PathBuf,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Deterministic generators only (always the case; kept for scripts).
    #[arg(long)]
    seedless: bool,
    /// Time integrator, overriding the config.
    #[arg(long, value_parser = ["bdf1", "bdf2", "bdf3"])]
    scheme: Option<String>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_file(&self.config)?;
        if let Some(dir) = &self.out {
            cfg.output.dir = dir.clone();
        }
        if let Some(s) = &self.scheme {
            cfg.time.scheme = s.parse::<Scheme>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let report = run_experiment(&cfg)?;
            print!("{}", report.error_table());
            eprint!("{}", report.summary());
            eprintln!("tables written to {}", cfg.output.dir.display());
        }
        Command::Nodes(args) => {
            let cfg = args.load()?;
            let (nodes, cells) = cfg.nodes.build()?;
            std::fs::create_dir_all(&cfg.output.dir)?;
            let path = cfg.output.dir.join("nodes.txt");
            std::fs::write(&path, nodes.to_table())?;
            print!(
                "{} interior {} far-field {}",
                cfg.nodes.name(),
                nodes.n_interior(),
                nodes.n_far_field()
            );
            match cells {
                Some(kind) => println!(" cells {}", kind.as_str()),
                None => println!(),
            }
            eprintln!("node table written to {}", path.display());
        }
        Command::Reference(args) => {
            let cfg = args.load()?;
            let reference = build_reference(&cfg)?;
            std::fs::create_dir_all(&cfg.output.dir)?;
            let last = reference.slices.last().expect("reference stores t = T");
            let path = cfg.output.dir.join("reference.txt");
            std::fs::write(&path, last.to_table())?;
            println!(
                "N {} M_fd {} t {} iterations {}",
                reference.n, reference.steps, last.t, reference.iterations
            );
            eprintln!("reference slice written to {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
