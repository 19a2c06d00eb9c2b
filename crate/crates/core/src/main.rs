use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use inhomoreg::harness::{design_provenance_json, run_design, run_experiment, synthesize, write_design, ExperimentConfig, Method};
use inhomoreg::io::{write_csv, write_pgm};
use inhomoreg::phantoms::{make_phantom, PhantomId, PhantomSpec};
use inhomoreg::Error;

#[derive(Parser)]
#[command(name = "inhomoreg", version, about = "Weighted inhomogeneous regularization for partial Fourier recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured method and write the comparison artifacts.
    Experiment(RunArgs),
    /// Run a single method.
    Recover {
        #[command(flatten)]
        run: RunArgs,
        /// Method name, e.g. `proposed+weight` or `p1`.
        #[arg(long)]
        method: Method,
    },
    /// Build and write the exponent, weight and jump fields only.
    Design(RunArgs),
    /// Write a phantom as CSV (and optionally PGM).
    Phantom {
        #[arg(long)]
        id: PhantomId,
        #[arg(long, default_value_t = 64)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Source PGM for `--id file`.
        #[arg(long)]
        path: Option<PathBuf>,
    },
}

/// Config file plus CLI overrides.
#[derive(Args)]
struct RunArgs {
    /// JSON experiment config. Optional when `--phantom` is given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// λ of the final solves.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    seed_schedule: Option<u64>,
    #[arg(long)]
    seed_noise: Option<u64>,
    /// Phantom id, replacing the config's phantom.
    #[arg(long)]
    phantom: Option<PhantomId>,
    #[arg(long)]
    size: Option<usize>,
    /// Ensemble size `C`.
    #[arg(long)]
    ensemble_size: Option<usize>,
}

impl RunArgs {
    fn resolve(&self, methods: Option<Vec<Method>>) -> Result<(ExperimentConfig, PathBuf), Error> {
        let mut cfg = match (&self.config, self.phantom) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(id)) => ExperimentConfig::new(PhantomSpec::new(id, 64), Method::all()),
            (None, None) => return Err(Error::InvalidInput("give --config or --phantom".into())),
        };
        if let (Some(_), Some(id)) = (&self.config, self.phantom) {
            cfg.phantom.id = id;
        }
        if let Some(n) = self.size {
            cfg.phantom.size = n;
        }
        if let Some(l) = self.lambda {
            cfg.solver.lambda = Some(l);
        }
        if let Some(s) = self.seed_schedule {
            cfg.ensemble.schedule_seed = s;
        }
        if let Some(s) = self.seed_noise {
            cfg.noise.seed = s;
        }
        if let Some(c) = self.ensemble_size {
            cfg.ensemble.size = c;
        }
        if let Some(m) = methods {
            cfg.methods = m;
        }
        cfg.validate()?;
        let out = self
            .out
            .clone()
            .or_else(|| cfg.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok((cfg, out))
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Experiment(args) => experiment(&args, None),
        Command::Recover { run, method } => experiment(&run, Some(vec![method])),
        Command::Design(args) => {
            let (cfg, out) = args.resolve(None)?;
            let m = synthesize(&cfg)?;
            let stage = run_design(&cfg, &m)?;
            write_design(&out, &stage.fields)?;
            let path = out.join("design.json");
            std::fs::write(&path, design_provenance_json(&cfg, &stage)).map_err(|e| Error::io(&path, e))?;
            eprintln!("design fields written to {}", out.display());
            Ok(())
        }
        Command::Phantom {
            id,
            size,
            out,
            pgm,
            path,
        } => {
            let spec = PhantomSpec {
                path,
                ..PhantomSpec::new(id, size)
            };
            let field = make_phantom(&spec)?;
            write_csv(&out, &field)?;
            if let Some(p) = pgm {
                write_pgm(p, &field)?;
            }
            Ok(())
        }
    }
}

fn experiment(args: &RunArgs, methods: Option<Vec<Method>>) -> Result<(), Error> {
    let (cfg, out) = args.resolve(methods)?;
    let result = run_experiment(&cfg)?;
    result.write_artifacts(&out)?;
    print!("{}", result.errors_csv());
    for r in result.results.iter().filter(|r| !r.report.converged) {
        eprintln!(
            "warning: {} did not converge in {} iterations",
            r.method, r.report.iterations
        );
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::InvalidProblem(_) => 2,
        Error::Io { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
