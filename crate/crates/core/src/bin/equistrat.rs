use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use equistrat::cli::{self, Format, Output};
use equistrat::spec::ProblemSpec;

#[derive(Parser)]
#[command(name = "equistrat", version, about = "Isotropy lattices, equivariants and zero-set strata of finite group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isotropy lattice with fixed-point dimensions and indices
    Lattice(Args),
    /// Equivariant dimensions, or the basis of one degree with --degree
    Equivariants(Args),
    /// Inclusion verdicts for every maximal isotropy subgroup
    Analyze(Args),
    /// Zero branches of one seeded map, compared with the predictions
    Probe(Args),
}

#[derive(clap::Args)]
struct Args {
    spec: PathBuf,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: Format,
}

fn run(cli: Cli) -> equistrat::Result<()> {
    let (which, args) = match cli.command {
        Command::Lattice(a) => ("lattice", a),
        Command::Equivariants(a) => ("equivariants", a),
        Command::Analyze(a) => ("analyze", a),
        Command::Probe(a) => ("probe", a),
    };
    let mut spec = ProblemSpec::load(&args.spec)?;
    if let Some(s) = args.seed {
        spec.options.seed = s;
    }
    if let Some(n) = args.samples {
        spec.options.samples = n;
    }
    if let (Some(d), "analyze") = (args.degree, which) {
        spec.options.degree_budget = d;
    }
    let problem = spec.build()?;
    let out: Output = match which {
        "lattice" => cli::cmd_lattice(&problem, args.format)?,
        "equivariants" => cli::cmd_equivariants(&problem, args.degree, args.format)?,
        "analyze" => cli::cmd_analyze(&problem, args.format)?,
        _ => cli::cmd_probe(&problem, args.degree, args.format)?,
    };
    print!("{}", out.stdout);
    if let Some(dir) = &args.out {
        out.write_files(dir)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("EQUISTRAT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
