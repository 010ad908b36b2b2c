//! Seeded trial execution and CSV records.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use submax::algos::{
    choose_lambda, combined_algorithm, random_lazy_greedy, random_lazy_greedy_partition, thresholding_greedy,
    CombinedMode, CombinedParams,
};
use submax::cardinality::{
    lazy_greedy_improved, lazy_greedy_simple, random_greedy, random_sampling_monotone, random_sampling_nonmonotone,
    standard_greedy,
};
use submax::{Error, Matroid, QueryLedger, SetFunction, Subset, ValueOracle};

use crate::brute::{brute_force_cardinality, brute_force_matroid};
use crate::schema::{InstanceSpec, MatroidSpec};

/// Trials handed to the worker pool at a time; records are written after each chunk.
const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    StandardGreedy,
    RandomGreedy,
    SamplingMonotone,
    SamplingNonmonotone,
    LazySimple,
    LazyImproved,
    Thresholding,
    RandomLazyGreedy,
    Combined,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::StandardGreedy => "standard-greedy",
            Algo::RandomGreedy => "random-greedy",
            Algo::SamplingMonotone => "sampling-monotone",
            Algo::SamplingNonmonotone => "sampling-nonmonotone",
            Algo::LazySimple => "lazy-simple",
            Algo::LazyImproved => "lazy-improved",
            Algo::Thresholding => "thresholding",
            Algo::RandomLazyGreedy => "random-lazy-greedy",
            Algo::Combined => "combined",
        }
    }

    pub fn needs_matroid(self) -> bool {
        matches!(self, Algo::Thresholding | Algo::RandomLazyGreedy | Algo::Combined)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    General,
    Partition,
}

impl From<Mode> for CombinedMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::General => CombinedMode::General,
            Mode::Partition => CombinedMode::Partition,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algo: Algo,
    pub instance: InstanceSpec,
    pub matroid: Option<MatroidSpec>,
    /// Cardinality bound; defaults to the matroid rank when a matroid is given.
    pub k: Option<usize>,
    pub eps: f64,
    /// Combined algorithm knob; `choose_lambda` when absent.
    pub lambda: Option<f64>,
    /// Lazy greedy accuracy (required by the cardinality lazy variants, default 0.5 for the matroid one).
    pub delta: Option<f64>,
    /// Random lazy greedy `B` (and the combined algorithm's diagnostic override).
    pub b: Option<f64>,
    pub iterations: Option<usize>,
    pub mode: Mode,
    pub sample_scale: f64,
    pub trials: usize,
    pub base_seed: u64,
    /// Compute the exhaustive optimum once and copy it into every record.
    pub with_opt: bool,
    /// When false, `wall_ms` is written as 0 so output depends only on the seeds.
    pub timing: bool,
    /// Worker count; falls back to `SUBMAX_THREADS`, then to the available parallelism.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(algo: Algo, instance: InstanceSpec) -> Self {
        RunConfig {
            algo,
            instance,
            matroid: None,
            k: None,
            eps: 0.1,
            lambda: None,
            delta: None,
            b: None,
            iterations: None,
            mode: Mode::General,
            sample_scale: 1.0,
            trials: 1,
            base_seed: 0,
            with_opt: false,
            timing: true,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub lambda: Option<f64>,
    pub seed: u64,
    pub trial: usize,
    pub f_value: f64,
    pub opt_value: Option<f64>,
    pub value_queries: u64,
    pub independence_queries: u64,
    pub failed: bool,
    pub wall_ms: f64,
}

pub const CSV_HEADER: &str =
    "algo,n,k,epsilon,lambda,seed,trial,f_value,opt_value,value_queries,independence_queries,failed,wall_ms";

struct Prepared {
    function: Arc<dyn SetFunction>,
    matroid: Option<Matroid>,
    k: usize,
    lambda: Option<f64>,
    opt: Option<f64>,
}

fn prepare(config: &RunConfig) -> anyhow::Result<Prepared> {
    if config.trials == 0 {
        bail!("trials must be at least 1");
    }
    let function = config.instance.build()?;
    let n = function.ground_size();
    let matroid = match &config.matroid {
        Some(spec) => Some(spec.build(n, Arc::new(QueryLedger::new()))?),
        None if config.algo.needs_matroid() => bail!("{} needs a matroid", config.algo.name()),
        None => None,
    };
    let k = match (config.k, &matroid) {
        (Some(k), _) if !config.algo.needs_matroid() => k,
        (_, Some(m)) => m.rank(),
        (_, None) => bail!("{} needs --k or a matroid", config.algo.name()),
    };
    if matches!(config.algo, Algo::LazySimple | Algo::LazyImproved) && config.delta.is_none() {
        bail!("{} needs --delta", config.algo.name());
    }
    let lambda = match config.algo {
        Algo::Combined | Algo::RandomLazyGreedy => {
            Some(config.lambda.unwrap_or_else(|| choose_lambda(n, k, config.eps)))
        }
        _ => config.lambda,
    };
    let opt = if config.with_opt {
        let f = ValueOracle::from_arc(Arc::clone(&function), Arc::new(QueryLedger::new()));
        let (value, _) = match &matroid {
            Some(m) if config.algo.needs_matroid() => brute_force_matroid(&f, m)?,
            _ => brute_force_cardinality(&f, k)?,
        };
        Some(value)
    } else {
        None
    };
    Ok(Prepared {
        function,
        matroid,
        k,
        lambda,
        opt,
    })
}

/// Runs one algorithm call; `Ok(None)` marks a failure whose value is `f(∅)`.
fn dispatch(
    config: &RunConfig,
    p: &Prepared,
    f: &ValueOracle,
    m: Option<&Matroid>,
    rng: &mut ChaCha8Rng,
) -> submax::Result<Option<Subset>> {
    let k = p.k;
    let eps = config.eps;
    let delta = config.delta.unwrap_or(0.5);
    let m = || m.expect("checked in prepare");
    Ok(Some(match config.algo {
        Algo::StandardGreedy => standard_greedy(f, k)?.solution,
        Algo::RandomGreedy => random_greedy(f, k, rng)?.solution,
        Algo::SamplingMonotone => random_sampling_monotone(f, k, eps, rng)?.solution,
        Algo::SamplingNonmonotone => random_sampling_nonmonotone(f, k, eps, rng)?.solution,
        Algo::LazySimple => lazy_greedy_simple(f, k, delta, rng)?.solution,
        Algo::LazyImproved => lazy_greedy_improved(f, k, delta, rng)?.solution,
        Algo::Thresholding => thresholding_greedy(f, m(), eps)?,
        Algo::RandomLazyGreedy => {
            let internal = CombinedParams::new(eps, p.lambda.expect("set in prepare")).internal(k);
            let b = config.b.unwrap_or(internal.b);
            let iterations = config.iterations.unwrap_or(internal.iterations);
            let out = match config.mode {
                Mode::General => random_lazy_greedy(f, m(), delta, b, iterations, rng)?,
                Mode::Partition => random_lazy_greedy_partition(f, m(), delta, b, iterations, rng)?,
            };
            return Ok(out.solution);
        }
        Algo::Combined => {
            let mut params = CombinedParams::new(eps, p.lambda.expect("set in prepare"))
                .mode(config.mode.into())
                .sample_scale(config.sample_scale);
            if let Some(b) = config.b {
                params = params.b_override(b);
            }
            let out = combined_algorithm(f, m(), params, rng)?;
            if out.failed {
                return Ok(None);
            }
            out.solution
        }
    }))
}

fn run_trial(config: &RunConfig, p: &Prepared, trial: usize) -> anyhow::Result<RunRecord> {
    let seed = config.base_seed.wrapping_add(trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ledger = Arc::new(QueryLedger::new());
    let f = ValueOracle::from_arc(Arc::clone(&p.function), Arc::clone(&ledger));
    let m = p.matroid.as_ref().map(|m| m.with_ledger(Arc::clone(&ledger)));
    let started = Instant::now();
    let result = dispatch(config, p, &f, m.as_ref(), &mut rng);
    let wall_ms = if config.timing {
        started.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    let snapshot = ledger.snapshot();
    let (solution, failed) = match result {
        Ok(Some(s)) => (s, false),
        Ok(None) | Err(Error::Precondition(_)) => (Subset::empty(), true),
        Err(e) => return Err(e).with_context(|| format!("trial {trial} (seed {seed})")),
    };
    let f_value = f.uncounted().evaluate(solution.as_slice())?;
    Ok(RunRecord {
        algo: config.algo.name().to_string(),
        n: p.function.ground_size(),
        k: p.k,
        epsilon: config.eps,
        lambda: p.lambda,
        seed,
        trial,
        f_value,
        opt_value: p.opt,
        value_queries: snapshot.value_queries,
        independence_queries: snapshot.independence_queries,
        failed,
        wall_ms,
    })
}

fn thread_count(config: &RunConfig) -> usize {
    config
        .threads
        .or_else(|| std::env::var("SUBMAX_THREADS").ok().and_then(|v| v.parse().ok()))
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
        .max(1)
}

/// Runs every trial, handing each finished chunk (in trial order) to `sink`.
fn run_with(
    config: &RunConfig,
    mut sink: impl FnMut(&[RunRecord]) -> anyhow::Result<()>,
) -> anyhow::Result<Vec<RunRecord>> {
    let prepared = prepare(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(config))
        .build()?;
    let mut records = Vec::with_capacity(config.trials);
    for start in (0..config.trials).step_by(CHUNK) {
        let end = (start + CHUNK).min(config.trials);
        let chunk: Vec<RunRecord> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|t| run_trial(config, &prepared, t))
                .collect::<anyhow::Result<_>>()
        })?;
        sink(&chunk)?;
        records.extend(chunk);
    }
    Ok(records)
}

/// Runs `config.trials` trials; trial `t` is seeded with `base_seed + t` and has its own ledger.
pub fn run_experiment(config: &RunConfig) -> anyhow::Result<Vec<RunRecord>> {
    run_with(config, |_| Ok(()))
}

/// CSV writer that emits the fixed header even when no record follows.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W) -> anyhow::Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        inner.write_record(CSV_HEADER.split(','))?;
        Ok(RecordWriter { inner })
    }

    pub fn write(&mut self, records: &[RunRecord]) -> anyhow::Result<()> {
        for r in records {
            self.inner.serialize(r)?;
        }
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> anyhow::Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| anyhow::anyhow!("flushing csv output: {}", e.error()))
    }
}

/// Like [`run_experiment`], writing records as each chunk of trials completes.
pub fn run_to_writer<W: Write>(config: &RunConfig, out: &mut RecordWriter<W>) -> anyhow::Result<Vec<RunRecord>> {
    run_with(config, |chunk| out.write(chunk))
}

/// One group of records per `λ`, in the given order.
pub fn sweep_lambda<W: Write>(
    config: &RunConfig,
    lambdas: &[f64],
    out: &mut RecordWriter<W>,
) -> anyhow::Result<Vec<RunRecord>> {
    if lambdas.is_empty() {
        bail!("no lambda values to sweep");
    }
    let mut records = Vec::new();
    for &lambda in lambdas {
        let cfg = RunConfig {
            lambda: Some(lambda),
            ..config.clone()
        };
        records.extend(run_to_writer(&cfg, out)?);
    }
    Ok(records)
}

pub fn to_csv_bytes(records: &[RunRecord]) -> anyhow::Result<Vec<u8>> {
    let mut w = RecordWriter::new(Vec::new())?;
    w.write(records)?;
    w.into_inner()
}

pub fn read_csv<R: std::io::Read>(input: R) -> anyhow::Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        bail!("unexpected csv header `{}`", header.join(","));
    }
    reader.deserialize().map(|r| r.map_err(Into::into)).collect()
}
