use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use krylov_ibc::harness::{
    execute, generate_matrix, matrix_to_string, write_matrix, ExperimentKind, ExperimentSpec,
    MatrixRecipe, StartKind,
};

#[derive(Parser)]
#[command(name = "krylov-ibc", version, about = "Krylov adversary and solver-race experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the matrix described by a recipe.
    Gen {
        #[arg(long)]
        recipe: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment and write its CSV table.
    Run {
        #[arg(value_enum)]
        experiment: RunKind,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Randomized certificate checks; exits nonzero on any failure.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RunKind {
    RitzTable,
    EigRace,
    LinearRace,
    Witness,
}

#[derive(Subcommand)]
enum VerifyTarget {
    Lemmas {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunOpts {
    /// `kind:key=value,...`, e.g. `scott_like:n=201`.
    #[arg(long)]
    recipe: String,
    /// e1, random_unit or a_times_random.
    #[arg(long, default_value = "a_times_random", value_parser = parse_start)]
    start: StartKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated tolerances.
    #[arg(long, value_delimiter = ',', default_value = "1e-6")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    #[arg(long, default_value_t = 10)]
    stride: usize,
    /// Seeds searched by `witness`.
    #[arg(long, default_value_t = 20)]
    cases: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_start(s: &str) -> Result<StartKind, String> {
    s.parse().map_err(|e: krylov_ibc::Error| e.to_string())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { recipe, seed, out } => {
            let recipe = MatrixRecipe::parse(&recipe)?.with_seed(seed);
            let m = generate_matrix(&recipe)?;
            match out {
                Some(p) => write_matrix(&p, &m).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{}", matrix_to_string(&m)),
            }
            Ok(true)
        }
        Command::Run { experiment, opts } => {
            let kind = match experiment {
                RunKind::RitzTable => ExperimentKind::RitzTable,
                RunKind::EigRace => ExperimentKind::EigRace,
                RunKind::LinearRace => ExperimentKind::LinearRace,
                RunKind::Witness => ExperimentKind::Witness,
            };
            let recipe = MatrixRecipe::parse(&opts.recipe)?;
            let mut spec = ExperimentSpec::new(kind, recipe, opts.start, opts.seed);
            spec.eps = opts.eps;
            spec.max_steps = opts.max_steps;
            spec.stride = opts.stride;
            spec.cases = opts.cases;
            spec.out = opts.out;
            execute(&spec)?;
            Ok(true)
        }
        Command::Verify {
            target: VerifyTarget::Lemmas { cases, seed, out },
        } => {
            let recipe = MatrixRecipe::parse("random_symmetric")?;
            let mut spec = ExperimentSpec::new(ExperimentKind::VerifyLemmas, recipe, StartKind::RandomUnit, seed);
            spec.cases = cases;
            spec.out = out;
            let table = execute(&spec)?;
            let failed = table.column("failed").expect("failed column");
            let mut ok = true;
            for row in &table.rows {
                if row[failed].as_f64() != Some(0.0) {
                    eprintln!("verification failed: {}", row[0]);
                    ok = false;
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
