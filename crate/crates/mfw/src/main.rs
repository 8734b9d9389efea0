//! Thin command-line front end over the experiment harness.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use mfw::harness::{self, ExperimentConfig, RewardStream};
use mfw::offline::offline_measured_greedy;
use mfw::schedule::Variant;
use mfw::Result;

#[derive(Parser)]
#[command(name = "mfw", about = "Online non-monotone DR-submodular maximization experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance (constraints plus reward stream) as JSON.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute an experiment: one CSV and summary JSON per variant.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only this variant (meta32|meta34|mono|bandit).
        #[arg(long)]
        variant: Option<String>,
        /// Reference-curve stride.
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Compute the offline reference curve on the generated stream.
    Reference {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Aggregate run CSVs into a table and report.json.
    Report {
        /// CSV files produced by `run`.
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn load_config(
    path: &PathBuf,
    seed: Option<u64>,
    out: Option<PathBuf>,
    variant: Option<String>,
    stride: Option<usize>,
) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.out = o;
    }
    if let Some(v) = variant {
        cfg.variants = vec![Variant::parse(&v)?];
    }
    if let Some(s) = stride {
        cfg.stride = s;
    }
    cfg.validate()?;
    if cfg.variants.contains(&Variant::Meta32) {
        eprintln!(
            "warning: meta32 runs ceil(T^(3/2)) = {} oracle updates per round; expect long runtimes",
            (cfg.t as f64).powf(1.5).ceil() as u64
        );
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { config, seed, out } => {
            let cfg = load_config(&config, seed, None, None, None)?;
            let stream = RewardStream::generate(&cfg)?;
            let text = harness::instance_json(&cfg, &stream);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::Run { config, seed, out, variant, stride } => {
            let cfg = load_config(&config, seed, out, variant, stride)?;
            let results = harness::run_many(&cfg)?;
            for r in &results {
                println!(
                    "{}: T_eff={} final_ratio={:.6} grad_calls={} value_calls={} ({:.2}s)",
                    r.variant.name(),
                    r.schedule.horizon,
                    r.final_ratio(),
                    r.grad_calls,
                    r.value_calls,
                    r.wall_seconds
                );
            }
            Ok(())
        }
        Command::Reference { config, seed, out, stride } => {
            let cfg = load_config(&config, seed, out, None, stride)?;
            let stream = RewardStream::generate(&cfg)?;
            let mut prefix = stream.prefix_accumulator();
            let mut lines = String::from("t,ref_value\n");
            for t in 0..stream.len() {
                prefix.push(&stream, t);
                let round = t + 1;
                if round % cfg.stride == 0 || round == stream.len() {
                    let summed = prefix.objective().expect("nonempty prefix");
                    let x = offline_measured_greedy(summed, stream.polytope(), cfg.k_ref)?;
                    lines.push_str(&format!("{},{:.11e}\n", round, summed.value(&x)));
                }
            }
            std::fs::create_dir_all(&cfg.out)?;
            let path = cfg.out.join(format!("reference_seed{}.csv", cfg.seed));
            std::fs::write(&path, lines)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Report { csv } => {
            harness::report(&csv).map(|_| ())
        }
    }
}
