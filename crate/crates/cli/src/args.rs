use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use horn_core::{SamplerKind, Spectrum};

#[derive(Debug, Parser)]
#[command(name = "horn", version, about = "Horn inequalities and frequency-map polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the triple table T^p_r for r = 1..p as JSON.
    GenTriples(GenTriplesArgs),
    /// Test a point against P1 (p values) or against P and P1 after projection (2p values).
    Check(CheckArgs),
    /// Sample the frequency map over random hermitian structures.
    SampleImf(SampleArgs),
    /// Sample spectra of S0 + R^-1 S0 R and project them onto the diagonal.
    SampleProj(SampleArgs),
    /// Sample spectra of adapted structures (the p x p side).
    SampleAdapted(SampleArgs),
    /// Check that domino doubling sends T^p_r into T^2p_2r.
    VerifyDomino(VerifyDominoArgs),
    /// Sample a custom split of the spectrum against the interlaced P1.
    ComparePartitions(CompareArgs),
}

#[derive(Debug, Args)]
pub struct GenTriplesArgs {
    #[arg(long)]
    pub p: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Comma-separated spectrum of S0 (2p values).
    #[arg(long)]
    pub spectrum: String,
    /// Factor applied to every spectrum value.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Complex dimension; must match the spectrum length when given.
    #[arg(long)]
    pub p: Option<usize>,
    /// Relative membership tolerance.
    #[arg(long, default_value_t = horn_core::polytope::DEFAULT_RELATIVE_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Comma-separated point: p values (tested against P1) or 2p values (tested against P).
    #[arg(long)]
    pub point: String,
    /// Closeness threshold for the hermitian-spectrum test.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Number of samples.
    #[arg(long, default_value_t = 25_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Closeness threshold for the hermitian flag; defaults to 1e-3 times the l1 norm of the spectrum.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value = "paper", value_parser = parse_sampler)]
    pub sampler: SamplerKind,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// CSV output path ("-" for stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyDominoArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// 1-based positions of the spectrum forming the first block, e.g. 1,2,3.
    #[arg(long)]
    pub split: String,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "paper", value_parser = parse_sampler)]
    pub sampler: SamplerKind,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_sampler(s: &str) -> std::result::Result<SamplerKind, String> {
    s.parse().map_err(|e: horn_core::Error| e.to_string())
}

/// Parses comma-separated decimals into a descending spectrum. The flag
/// reports whether the input had to be reordered.
pub fn parse_spectrum(text: &str) -> Result<(Spectrum, bool)> {
    let text = text.trim();
    if text.is_empty() {
        bail!("empty spectrum");
    }
    let values = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>().with_context(|| format!("'{tok}' is not a number"))
        })
        .collect::<Result<Vec<f64>>>()?;
    let sorted = Spectrum::sorted(values.clone())?;
    let reordered = sorted.values() != values.as_slice();
    Ok((sorted, reordered))
}

pub fn parse_positions(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .with_context(|| format!("'{tok}' is not a position"))
        })
        .collect()
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn read_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected 'key = value'", n + 1);
        };
        map.insert(
            key.trim().trim_start_matches("--").to_string(),
            value.trim().to_string(),
        );
    }
    Ok(map)
}

/// Appends `--key value` for every config entry whose flag is absent from
/// `argv`, so explicit flags win over the file.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let args: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let path = args.iter().enumerate().find_map(|(n, a)| {
        a.strip_prefix("--config=")
            .map(str::to_string)
            .or_else(|| (a == "--config").then(|| args.get(n + 1).cloned()).flatten())
    });
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let mut merged = argv;
    for (key, value) in read_config(&text)? {
        let flag = format!("--{key}");
        let present = args.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
        if !present {
            merged.push(flag.into());
            merged.push(value.into());
        }
    }
    Ok(merged)
}
