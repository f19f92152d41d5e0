//! Seeded Monte Carlo runs over hermitian structures and rotations.
//!
//! Three experiments share one driver:
//! - [`Experiment::ImF`]: spectra of `S − J₀ S J₀` with `S = R S₀ Rᵗ`, i.e. the
//!   frequency map at `J = Rᵗ J₀ R`;
//! - [`Experiment::Projection`]: spectra of `S₀ + Rᵗ S₀ R` projected onto Δ;
//! - [`Experiment::Adapted`]: spectra of `σ₋ + ρᵗ σ₊ ρ` for `ρ ∈ SO(p)`.
//!
//! Each tested point is checked against the interlaced `P₁`. Sample `i` uses
//! the generator `sample_rng(seed, i)`; samples are computed in parallel in
//! fixed-size chunks and handed to the sink in index order, so output does not
//! depend on the thread count.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::horn::TripleCache;
use crate::linalg::{eigenvalues_sym, SymMatrix};
use crate::polytope::{
    build_p1, is_hermitian_spectrum, project_to_delta, rotated_sum_spectrum, PartitionPair, PolytopeSpec, Tolerances,
};
use crate::sampling::{sample_rng, SamplerKind};
use crate::spectrum::Spectrum;
use crate::structure::frequency_map_conjugated;

const CHUNK: usize = 4096;
/// Inequalities with slack below this are counted as active.
pub const ACTIVE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ImF,
    Projection,
    Adapted,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::ImF => "imf",
            Experiment::Projection => "projection",
            Experiment::Adapted => "adapted",
        })
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "imf" => Ok(Experiment::ImF),
            "projection" | "proj" => Ok(Experiment::Projection),
            "adapted" => Ok(Experiment::Adapted),
            other => Err(Error::InvalidConfig(format!("unknown experiment '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub p: usize,
    pub s0: SymMatrix,
    /// Spectrum of `s0`.
    pub sigma: Spectrum,
    pub samples: usize,
    pub seed: u64,
    /// Closeness threshold for the hermitian-spectrum flag.
    pub epsilon: f64,
    pub sampler: SamplerKind,
    pub tolerances: Tolerances,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl ExperimentConfig {
    /// Diagonal `S₀ = diag(σ)` with default epsilon and tolerances.
    pub fn from_spectrum(sigma: Spectrum, samples: usize, seed: u64) -> Result<Self> {
        let s0 = SymMatrix::from_diagonal(sigma.values());
        ExperimentConfig::with_matrix(s0, sigma, samples, seed)
    }

    pub fn from_matrix(s0: SymMatrix, samples: usize, seed: u64) -> Result<Self> {
        let sigma = eigenvalues_sym(&s0);
        ExperimentConfig::with_matrix(s0, sigma, samples, seed)
    }

    fn with_matrix(s0: SymMatrix, sigma: Spectrum, samples: usize, seed: u64) -> Result<Self> {
        if sigma.is_empty() || !sigma.len().is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "S0 must have even positive size, got {}",
                sigma.len()
            )));
        }
        let cfg = ExperimentConfig {
            p: sigma.len() / 2,
            epsilon: default_epsilon(&sigma),
            tolerances: Tolerances::for_sigma(&sigma),
            s0,
            sigma,
            samples,
            seed,
            sampler: SamplerKind::default(),
            threads: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if [self.tolerances.trace, self.tolerances.inequality]
            .iter()
            .any(|t| t.is_nan() || *t < 0.0)
        {
            return Err(Error::InvalidConfig("tolerances must be nonnegative".into()));
        }
        if self.s0.n() != 2 * self.p || self.sigma.len() != 2 * self.p || self.p == 0 {
            return Err(Error::InvalidConfig("S0 and sigma must both have size 2p".into()));
        }
        Ok(())
    }
}

/// `1e-3 · max(‖σ‖₁, tiny)`.
pub fn default_epsilon(sigma: &Spectrum) -> f64 {
    1e-3 * sigma.l1_norm().max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub index: u64,
    /// The `2p` spectrum (for the adapted run, the doubled `p` spectrum).
    pub spectrum: Spectrum,
    /// The `p` point tested against `P₁`.
    pub point: Spectrum,
    pub trace_residual: f64,
    pub min_slack: f64,
    pub hermitian_close: bool,
    pub inside: bool,
    /// Indices of inequalities with slack below [`ACTIVE_SLACK`].
    pub active: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub samples: usize,
    pub count_inside: usize,
    pub count_hermitian_close: usize,
    pub worst_trace_residual: f64,
    pub worst_min_slack: f64,
    pub point_min: Vec<f64>,
    pub point_max: Vec<f64>,
    pub inequalities: Vec<String>,
    /// How many samples had each inequality active.
    pub tight_counts: Vec<usize>,
    pub wall_time_secs: f64,
}

impl RunReport {
    pub fn all_inside(&self) -> bool {
        self.count_inside == self.samples
    }
}

/// Incremental form of [`summarize`].
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    experiment: Experiment,
    config: ExperimentConfig,
    inequalities: Vec<String>,
    samples: usize,
    count_inside: usize,
    count_hermitian_close: usize,
    worst_trace_residual: f64,
    worst_min_slack: f64,
    point_min: Vec<f64>,
    point_max: Vec<f64>,
    tight_counts: Vec<usize>,
}

impl ReportBuilder {
    pub fn new(experiment: Experiment, config: &ExperimentConfig, spec: &PolytopeSpec) -> Self {
        ReportBuilder {
            experiment,
            config: config.clone(),
            inequalities: spec.inequalities.iter().map(|q| q.triple.to_string()).collect(),
            samples: 0,
            count_inside: 0,
            count_hermitian_close: 0,
            worst_trace_residual: 0.0,
            worst_min_slack: f64::INFINITY,
            point_min: vec![f64::INFINITY; spec.p],
            point_max: vec![f64::NEG_INFINITY; spec.p],
            tight_counts: vec![0; spec.inequalities.len()],
        }
    }

    pub fn push(&mut self, record: &SampleRecord) {
        self.samples += 1;
        self.count_inside += usize::from(record.inside);
        self.count_hermitian_close += usize::from(record.hermitian_close);
        self.worst_trace_residual = self.worst_trace_residual.max(record.trace_residual.abs());
        self.worst_min_slack = self.worst_min_slack.min(record.min_slack);
        for (k, &v) in record.point.values().iter().enumerate() {
            self.point_min[k] = self.point_min[k].min(v);
            self.point_max[k] = self.point_max[k].max(v);
        }
        for &a in &record.active {
            self.tight_counts[a] += 1;
        }
    }

    pub fn finish(self, wall_time_secs: f64) -> Result<RunReport> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("cannot summarize an empty run".into()));
        }
        Ok(RunReport {
            experiment: self.experiment,
            config: self.config,
            samples: self.samples,
            count_inside: self.count_inside,
            count_hermitian_close: self.count_hermitian_close,
            worst_trace_residual: self.worst_trace_residual,
            worst_min_slack: self.worst_min_slack,
            point_min: self.point_min,
            point_max: self.point_max,
            inequalities: self.inequalities,
            tight_counts: self.tight_counts,
            wall_time_secs,
        })
    }
}

/// Aggregates records into a report. Fails on an empty stream.
pub fn summarize<'a>(
    experiment: Experiment,
    config: &ExperimentConfig,
    spec: &PolytopeSpec,
    records: impl IntoIterator<Item = &'a SampleRecord>,
) -> Result<RunReport> {
    let mut builder = ReportBuilder::new(experiment, config, spec);
    for r in records {
        builder.push(r);
    }
    builder.finish(0.0)
}

/// The interlaced `P₁` for a configuration.
pub fn p1_for(config: &ExperimentConfig) -> Result<PolytopeSpec> {
    let partition = PartitionPair::interlaced(&config.sigma)?;
    build_p1(&config.sigma, &partition, &mut TripleCache::new())
}

/// Computes sample `index` of an experiment.
pub fn sample(
    experiment: Experiment,
    config: &ExperimentConfig,
    spec: &PolytopeSpec,
    index: u64,
) -> Result<SampleRecord> {
    let mut rng = sample_rng(config.seed, index);
    let p = config.p;
    let (spectrum, point) = match experiment {
        Experiment::ImF => {
            let r = config.sampler.sample(2 * p, &mut rng);
            frequency_map_conjugated(&r, &config.s0)?
        }
        Experiment::Projection => {
            let r = config.sampler.sample(2 * p, &mut rng);
            let c = config.s0.conjugate_by(r.matrix()).add(&config.s0)?;
            let full = eigenvalues_sym(&c);
            let nu = project_to_delta(&full)?;
            (full, nu)
        }
        Experiment::Adapted => {
            let (minus, plus) = config.sigma.interlaced_halves()?;
            let rho = config.sampler.sample(p, &mut rng);
            let nu = rotated_sum_spectrum(&minus, &plus, rho.matrix());
            (nu.doubled(), nu)
        }
    };
    let slacks = spec.slacks(&point)?;
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let trace_residual = point.sum() - spec.trace_sum;
    let membership = crate::polytope::Membership {
        trace_residual,
        min_slack,
    };
    Ok(SampleRecord {
        index,
        hermitian_close: is_hermitian_spectrum(&spectrum, config.epsilon),
        inside: membership.is_inside(&config.tolerances),
        active: slacks
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < ACTIVE_SLACK)
            .map(|(k, _)| k)
            .collect(),
        spectrum,
        point,
        trace_residual,
        min_slack,
    })
}

/// Runs an experiment, streaming records to `sink` in index order.
pub fn run<F>(experiment: Experiment, config: &ExperimentConfig, mut sink: F) -> Result<RunReport>
where
    F: FnMut(&SampleRecord) -> Result<()>,
{
    config.validate()?;
    let start = Instant::now();
    let spec = p1_for(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let mut builder = ReportBuilder::new(experiment, config, &spec);
    let total = config.samples as u64;
    let mut first = 0u64;
    while first < total {
        let last = (first + CHUNK as u64).min(total);
        let chunk: Vec<SampleRecord> = pool.install(|| {
            (first..last)
                .into_par_iter()
                .map(|i| sample(experiment, config, &spec, i))
                .collect::<Result<_>>()
        })?;
        for record in &chunk {
            builder.push(record);
            sink(record)?;
        }
        first = last;
    }
    builder.finish(start.elapsed().as_secs_f64())
}

pub fn run_imf<F>(config: &ExperimentConfig, sink: F) -> Result<RunReport>
where
    F: FnMut(&SampleRecord) -> Result<()>,
{
    run(Experiment::ImF, config, sink)
}

pub fn run_projection<F>(config: &ExperimentConfig, sink: F) -> Result<RunReport>
where
    F: FnMut(&SampleRecord) -> Result<()>,
{
    run(Experiment::Projection, config, sink)
}

pub fn run_adapted<F>(config: &ExperimentConfig, sink: F) -> Result<RunReport>
where
    F: FnMut(&SampleRecord) -> Result<()>,
{
    run(Experiment::Adapted, config, sink)
}

/// CSV output: a header row, then one record per line with every float in
/// `{:.16e}` form (17 significant digits).
pub struct CsvWriter<W: Write> {
    out: W,
    p: usize,
    wrote_header: bool,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W, p: usize) -> Self {
        CsvWriter {
            out,
            p,
            wrote_header: false,
        }
    }

    pub fn header(p: usize) -> String {
        let mut cols = vec!["index".to_string()];
        cols.extend((1..=2 * p).map(|k| format!("gamma_{k}")));
        cols.extend((1..=p).map(|k| format!("nu_{k}")));
        cols.extend(["trace_residual", "min_slack", "hermitian_close", "inside", "active"].map(String::from));
        cols.join(",")
    }

    pub fn format_record(record: &SampleRecord) -> String {
        let mut fields = vec![record.index.to_string()];
        fields.extend(record.spectrum.values().iter().map(|v| format_float(*v)));
        fields.extend(record.point.values().iter().map(|v| format_float(*v)));
        fields.push(format_float(record.trace_residual));
        fields.push(format_float(record.min_slack));
        fields.push(record.hermitian_close.to_string());
        fields.push(record.inside.to_string());
        fields.push(record.active.iter().map(usize::to_string).collect::<Vec<_>>().join(";"));
        fields.join(",")
    }

    pub fn write(&mut self, record: &SampleRecord) -> std::io::Result<()> {
        if !self.wrote_header {
            writeln!(self.out, "{}", Self::header(self.p))?;
            self.wrote_header = true;
        }
        writeln!(self.out, "{}", Self::format_record(record))
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        if !self.wrote_header {
            writeln!(self.out, "{}", Self::header(self.p))?;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Runs an experiment writing CSV to `out`.
pub fn run_to_csv<W: Write>(experiment: Experiment, config: &ExperimentConfig, out: W) -> Result<(RunReport, W)> {
    let mut writer = CsvWriter::new(out, config.p);
    let report = run(experiment, config, |r| writer.write(r).map_err(io_error))?;
    let out = writer.finish().map_err(io_error)?;
    Ok((report, out))
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidConfig(format!("write failed: {e}"))
}
