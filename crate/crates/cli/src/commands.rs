use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use horn_core::experiments::{run_to_csv, Experiment, ExperimentConfig, RunReport};
use horn_core::{
    build_p, build_p1, compare_partitions, is_hermitian_spectrum, project_to_delta, verify_domino_theorem,
    PartitionPair, Spectrum, Tolerances, TripleCache,
};
use serde_json::json;

use crate::args::{
    parse_positions, parse_spectrum, CheckArgs, Command, CompareArgs, GenTriplesArgs, SampleArgs, SpectrumArgs,
    VerifyDominoArgs,
};

pub enum Outcome {
    Success,
    Violation,
}

impl Outcome {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Success
        } else {
            Outcome::Violation
        }
    }
}

pub fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::GenTriples(a) => gen_triples(a),
        Command::Check(a) => check(a),
        Command::SampleImf(a) => sample(Experiment::ImF, a),
        Command::SampleProj(a) => sample(Experiment::Projection, a),
        Command::SampleAdapted(a) => sample(Experiment::Adapted, a),
        Command::VerifyDomino(a) => verify_domino(a),
        Command::ComparePartitions(a) => compare(a),
    }
}

fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdout().lock()));
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Spectrum of S0 after scaling, with the `--p` cross-check.
fn load_sigma(a: &SpectrumArgs) -> Result<Spectrum> {
    let (raw, reordered) = parse_spectrum(&a.spectrum)?;
    if reordered {
        eprintln!("warning: spectrum was not in descending order; sorted it");
    }
    if !(a.scale.is_finite() && a.scale != 0.0) {
        bail!("--scale must be finite and nonzero");
    }
    let sigma = raw.scaled(a.scale)?;
    if !sigma.len().is_multiple_of(2) {
        bail!("spectrum must have even length 2p, got {}", sigma.len());
    }
    if let Some(p) = a.p {
        if 2 * p != sigma.len() {
            bail!("--p {p} does not match a spectrum of length {}", sigma.len());
        }
    }
    if a.tol.is_nan() || a.tol < 0.0 {
        bail!("--tol must be nonnegative");
    }
    Ok(sigma)
}

fn gen_triples(a: GenTriplesArgs) -> Result<Outcome> {
    if a.p == 0 {
        bail!("--p must be at least 1");
    }
    let table = TripleCache::new().table(a.p).clone();
    let counts = table
        .counts()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("+");
    match a.out {
        Some(path) => {
            write_json(&path, &table.to_json())?;
            println!("T^{}: {counts} triples by rank, written to {}", a.p, path.display());
        }
        None => write_json(Path::new("-"), &table.to_json())?,
    }
    Ok(Outcome::Success)
}

fn check(a: CheckArgs) -> Result<Outcome> {
    let sigma = load_sigma(&a.spectrum)?;
    let (point, reordered) = parse_spectrum(&a.point)?;
    if reordered {
        eprintln!("warning: point was not in descending order; sorted it");
    }
    let tol = Tolerances::scaled(a.spectrum.tol, &sigma);
    let mut cache = TripleCache::new();
    let p1 = build_p1(&sigma, &PartitionPair::interlaced(&sigma)?, &mut cache)?;
    let p = sigma.len() / 2;

    if point.len() == p {
        let m = p1.membership_slack(&point)?;
        let report = json!({
            "polytope": "P1",
            "trace_residual": m.trace_residual,
            "min_slack": m.min_slack,
            "inside_p1": m.is_inside(&tol),
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(Outcome::Success);
    }
    if point.len() != 2 * p {
        bail!("point must have {p} or {} values, got {}", 2 * p, point.len());
    }
    let in_p = build_p(&sigma, &mut cache)?.membership_slack(&point)?;
    let tol_p = Tolerances {
        trace: 2.0 * tol.trace,
        inequality: 2.0 * tol.inequality,
    };
    let nu = project_to_delta(&point)?;
    let projected = p1.membership_slack(&nu)?;
    let epsilon = a
        .epsilon
        .unwrap_or_else(|| horn_core::experiments::default_epsilon(&sigma));
    let inside_p = in_p.is_inside(&tol_p);
    let inside_p1 = projected.is_inside(&tol);
    let report = json!({
        "polytope": "P",
        "trace_residual": in_p.trace_residual,
        "min_slack": in_p.min_slack,
        "inside_p": inside_p,
        "hermitian": is_hermitian_spectrum(&point, epsilon),
        "projection": nu.values(),
        "projection_trace_residual": projected.trace_residual,
        "projection_min_slack": projected.min_slack,
        "projection_inside_p1": inside_p1,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    // A point of P whose projection leaves P1 contradicts the projection property.
    Ok(Outcome::from_ok(!inside_p || inside_p1))
}

fn sample(experiment: Experiment, a: SampleArgs) -> Result<Outcome> {
    let sigma = load_sigma(&a.spectrum)?;
    let mut cfg = ExperimentConfig::from_spectrum(sigma.clone(), a.n, a.seed)?;
    cfg.tolerances = Tolerances::scaled(a.spectrum.tol, &sigma);
    if let Some(eps) = a.epsilon {
        cfg.epsilon = eps;
    }
    cfg.sampler = a.sampler;
    cfg.threads = a.threads;
    cfg.validate()?;

    let to_stdout = a.out.as_deref() == Some(Path::new("-"));
    let report = match &a.out {
        Some(path) => {
            let (report, mut out) = run_to_csv(experiment, &cfg, open_output(path)?)?;
            out.flush()?;
            report
        }
        None => horn_core::experiments::run(experiment, &cfg, |_| Ok(()))?,
    };
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    let summary = summary_lines(&report);
    if to_stdout {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(Outcome::from_ok(report.all_inside()))
}

fn summary_lines(r: &RunReport) -> String {
    format!(
        "experiment = {}\nsamples = {}\ncountInside = {}\nhermitianClose = {}\nworstTraceResidual = {:e}\nworstMinSlack = {:e}\nwallTime = {:.3}s",
        r.experiment,
        r.samples,
        r.count_inside,
        r.count_hermitian_close,
        r.worst_trace_residual,
        r.worst_min_slack,
        r.wall_time_secs
    )
}

fn verify_domino(a: VerifyDominoArgs) -> Result<Outcome> {
    if a.p > 5 {
        bail!("--p {} is beyond the supported range (at most 5)", a.p);
    }
    let report = verify_domino_theorem(a.p, &mut TripleCache::new())?;
    println!("{report}");
    for f in &report.failures {
        println!("counterexample: {} -> {}", f.triple, f.doubled);
    }
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(Outcome::from_ok(report.failures.is_empty()))
}

fn compare(a: CompareArgs) -> Result<Outcome> {
    let sigma = load_sigma(&a.spectrum)?;
    let custom = PartitionPair::from_minus_positions(&sigma, &parse_positions(&a.split)?)?;
    let report = compare_partitions(&sigma, &custom, a.n, a.seed, a.sampler, &mut TripleCache::new())?;
    println!(
        "samples = {}\ninside = {}\nfraction = {}\nmaxViolation = {:e}",
        report.samples, report.inside, report.fraction, report.max_violation
    );
    if let Some(path) = &a.report {
        write_json(path, &report)?;
    }
    Ok(Outcome::from_ok(report.inside == report.samples))
}
