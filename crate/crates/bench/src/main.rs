use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use submax_bench::generate::{generate_instance, generate_matroid, Family, GenSpec, MatroidFamily};
use submax_bench::runner::{read_csv, run_to_writer, sweep_lambda, Algo, Mode, RecordWriter, RunConfig};
use submax_bench::schema::{read_json, write_json, InstanceSpec, MatroidSpec};
use submax_bench::summary::{summarize, to_csv};

#[derive(Parser)]
#[command(name = "submax", version, about = "Submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file and optionally a matroid file.
    Gen(GenArgs),
    /// Run seeded trials of one algorithm and write one CSV row per trial.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run the same configuration for each lambda.
    SweepLambda {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
    },
    /// Aggregate a run CSV per (algo, n, k, epsilon, lambda).
    Summarize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit JSON instead of CSV.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    /// Coverage universe size or facility client count.
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// uniform, partition or graphic.
    #[arg(long)]
    matroid_family: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    blocks: usize,
    #[arg(long)]
    matroid_out: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    matroid: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// Random lazy greedy B (for the combined algorithm, a diagnostic override).
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::General)]
    mode: Mode,
    /// Fraction of the continuous greedy's per-estimate sample budget.
    #[arg(long, default_value_t = 1.0)]
    sample_scale: f64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record the exhaustive optimum in every row.
    #[arg(long)]
    opt: bool,
    /// Write wall_ms as 0 so identical seeds give identical bytes.
    #[arg(long)]
    no_timing: bool,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let instance: InstanceSpec = read_json(&self.instance)?;
        let matroid: Option<MatroidSpec> = self.matroid.as_deref().map(read_json).transpose()?;
        Ok(RunConfig {
            matroid,
            k: self.k,
            eps: self.epsilon,
            delta: self.delta,
            b: self.b,
            iterations: self.iterations,
            mode: self.mode,
            sample_scale: self.sample_scale,
            trials: self.trials,
            base_seed: self.seed,
            with_opt: self.opt,
            timing: !self.no_timing,
            ..RunConfig::new(self.algo, instance)
        })
    }
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Gen(a) => {
            let family: Family = a.family.parse()?;
            let instance = generate_instance(
                family,
                GenSpec {
                    n: a.n,
                    density: a.density,
                    width: a.width,
                    seed: a.seed,
                },
            )?;
            write_json(&a.out, &instance)?;
            if let Some(name) = &a.matroid_family {
                let family: MatroidFamily = name.parse()?;
                let k = a.k.context("--k is required with --matroid-family")?;
                let path = a
                    .matroid_out
                    .context("--matroid-out is required with --matroid-family")?;
                write_json(&path, &generate_matroid(family, a.n, k, a.blocks, a.seed)?)?;
            }
        }
        Command::Run { common, lambda } => {
            let config = RunConfig {
                lambda,
                ..common.config()?
            };
            let mut w = RecordWriter::new(output(common.out.as_ref())?)?;
            run_to_writer(&config, &mut w)?;
            w.into_inner()?.flush()?;
        }
        Command::SweepLambda { common, lambda } => {
            let config = common.config()?;
            let mut w = RecordWriter::new(output(common.out.as_ref())?)?;
            sweep_lambda(&config, &lambda, &mut w)?;
            w.into_inner()?.flush()?;
        }
        Command::Summarize { input, out, json } => {
            let records = read_csv(File::open(&input).with_context(|| format!("opening {}", input.display()))?)?;
            anyhow::ensure!(!records.is_empty(), "{} has no records", input.display());
            let groups = summarize(&records);
            let mut w = output(out.as_ref())?;
            if json {
                serde_json::to_writer_pretty(&mut w, &groups)?;
                writeln!(w)?;
            } else {
                w.write_all(&to_csv(&groups)?)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
