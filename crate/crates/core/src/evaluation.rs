//! ε-approximations and benchmark tables.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Deserialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::generators::GenSpec;
use crate::partitioner::{run_partition, Algorithm, PartitionParams, PotentialMode, RunReport};
use crate::rng;
use crate::system::{crossing_number, Partition, SetSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// One uniform element from every part of a partition.
    PartitionBased,
    /// Distinct elements drawn uniformly without replacement.
    Uniform,
}

/// A subset of the ground set and how well it approximates every range.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Members in increasing order.
    pub elements: Vec<usize>,
    pub epsilon: f64,
    pub kind: SampleKind,
}

/// Largest gap over all ranges between the density of the range in the
/// ground set and its density in `sample`.
pub fn error_factor(system: &SetSystem, sample: &[usize]) -> Result<f64> {
    let n = system.n();
    if sample.is_empty() {
        return Err(Error::arg("error factor needs a nonempty sample"));
    }
    if let Some(&x) = sample.iter().find(|&&x| x >= n) {
        return Err(Error::arg(format!("sample element {x} out of bounds (n = {n})")));
    }
    let members = BitSet::from_indices(n, sample.iter().copied());
    let size = members.count() as f64;
    Ok(system
        .ranges()
        .iter()
        .map(|r| (r.count() as f64 / n as f64 - r.intersection_count(&members) as f64 / size).abs())
        .fold(0.0, f64::max))
}

/// Picks one element uniformly at random from every part.
pub fn eps_approx_from_partition(system: &SetSystem, partition: &Partition, seed: u64) -> Result<Sample> {
    if partition.n() != system.n() || !partition.is_complete() {
        return Err(Error::arg("partition does not cover the system's elements"));
    }
    let mut rng = rng::seeded(seed);
    let mut elements = Vec::with_capacity(partition.t());
    for part in partition.parts() {
        if part.is_empty() {
            return Err(Error::arg("partition has an empty part"));
        }
        elements.push(part[rng.random_range(0..part.len())]);
    }
    elements.sort_unstable();
    let epsilon = error_factor(system, &elements)?;
    Ok(Sample { elements, epsilon, kind: SampleKind::PartitionBased })
}

/// `size` distinct elements chosen uniformly without replacement.
pub fn uniform_sample(system: &SetSystem, size: usize, seed: u64) -> Result<Sample> {
    let n = system.n();
    if size == 0 || size > n {
        return Err(Error::arg(format!("sample size {size} must lie in [1, {n}]")));
    }
    let mut elements = rand::seq::index::sample(&mut rng::seeded(seed), n, size).into_vec();
    elements.sort_unstable();
    let epsilon = error_factor(system, &elements)?;
    Ok(Sample { elements, epsilon, kind: SampleKind::Uniform })
}

/// A method benchmarked by [`run_bench`]: a partitioner, or the uniform
/// sampling baseline (which only reports ε).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub enum Method {
    Partition(Algorithm),
    Uniform,
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        if s == "uniform" {
            Ok(Method::Uniform)
        } else {
            s.parse().map(Method::Partition)
        }
    }
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Partition(a) => a.as_str(),
            Method::Uniform => "uniform",
        }
    }
}

/// Experiment descriptor, read from TOML.
///
/// ```toml
/// algorithms = ["minweight", "partatonce", "uniform"]
/// t = [128]
/// seeds = 10
/// epsilon = true
///
/// [generator]
/// family = "grid"
/// n = 2048
/// d = 2
/// seed = 1
/// ```
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchDescriptor {
    pub generator: GenSpec,
    pub algorithms: Vec<Method>,
    pub t: Vec<usize>,
    /// Runs per `(t, algorithm)`, with seeds `base_seed .. base_seed + seeds`.
    pub seeds: u64,
    #[serde(default)]
    pub base_seed: u64,
    /// Potential exponent; defaults to the family's own.
    pub d: Option<f64>,
    /// Part-at-once samples per part; defaults to the family policy.
    pub w: Option<usize>,
    #[serde(default)]
    pub mode: PotentialMode,
    /// Also report ε of the one-element-per-part sample.
    #[serde(default)]
    pub epsilon: bool,
    /// Part-at-once workers per run.
    pub threads: Option<usize>,
}

impl BenchDescriptor {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// One line of a benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub d: f64,
    pub t: usize,
    pub algo: String,
    pub w: Option<usize>,
    pub seed: u64,
    pub kappa: Option<u32>,
    pub violations_practical: Option<u64>,
    pub violations_theoretical: Option<u64>,
    /// Wall-clock time, left out when byte-reproducible output is wanted.
    pub runtime_ms: Option<f64>,
    pub epsilon: Option<f64>,
}

pub const CSV_HEADER: &str =
    "family,n,m,d,t,algo,w,seed,kappa,violations_practical,violations_theoretical,runtime_ms,epsilon";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl BenchRow {
    pub fn from_report(family: &str, report: &RunReport, epsilon: Option<f64>) -> Self {
        BenchRow {
            family: family.to_string(),
            n: report.n,
            m: report.m,
            d: report.d,
            t: report.t,
            algo: report.algorithm.to_string(),
            w: report.w,
            seed: report.seed,
            kappa: Some(report.kappa),
            violations_practical: Some(report.total_violations_practical()),
            violations_theoretical: Some(report.total_violations_theoretical()),
            runtime_ms: Some(report.runtime.as_secs_f64() * 1e3),
            epsilon,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            self.m,
            self.d,
            self.t,
            self.algo,
            opt(self.w),
            self.seed,
            opt(self.kappa),
            opt(self.violations_practical),
            opt(self.violations_theoretical),
            self.runtime_ms.map(|v| format!("{v:.3}")).unwrap_or_default(),
            opt(self.epsilon),
        )
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    Some((mean, var.sqrt()))
}

#[derive(Debug, Clone, Default)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    /// Aggregate lines, one per `(t, algorithm)` group in first-seen order:
    /// every numeric column as `mean±std` over the group's seeds.
    pub fn aggregate_lines(&self) -> Vec<String> {
        let mut groups: Vec<(usize, &str)> = Vec::new();
        for row in &self.rows {
            if !groups.contains(&(row.t, row.algo.as_str())) {
                groups.push((row.t, &row.algo));
            }
        }
        groups
            .into_iter()
            .map(|(t, algo)| {
                let rows: Vec<&BenchRow> = self.rows.iter().filter(|r| r.t == t && r.algo == algo).collect();
                let first = rows[0];
                let stat = |f: &dyn Fn(&BenchRow) -> Option<f64>| {
                    let vals: Vec<f64> = rows.iter().filter_map(|r| f(r)).collect();
                    mean_std(&vals).map(|(m, s)| format!("{m:.4}±{s:.4}")).unwrap_or_default()
                };
                format!(
                    "{},{},{},{},{},{},{},mean±std,{},{},{},{},{}",
                    first.family,
                    first.n,
                    first.m,
                    first.d,
                    t,
                    algo,
                    opt(first.w),
                    stat(&|r| r.kappa.map(f64::from)),
                    stat(&|r| r.violations_practical.map(|v| v as f64)),
                    stat(&|r| r.violations_theoretical.map(|v| v as f64)),
                    stat(&|r| r.runtime_ms),
                    stat(&|r| r.epsilon),
                )
            })
            .collect()
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        let mut text = String::new();
        writeln!(text, "{CSV_HEADER}").unwrap();
        for row in &self.rows {
            writeln!(text, "{}", row.to_csv()).unwrap();
        }
        for line in self.aggregate_lines() {
            writeln!(text, "{line}").unwrap();
        }
        out.write_all(text.as_bytes())?;
        Ok(())
    }
}

/// Runs every `(t, method, seed)` combination of the descriptor on one
/// generated instance. Rows may be computed concurrently; they are returned
/// grouped by `t`, then method, then seed.
pub fn run_bench(desc: &BenchDescriptor) -> Result<BenchTable> {
    if desc.algorithms.is_empty() {
        return Ok(BenchTable::default());
    }
    let system = desc.generator.generate()?;
    run_bench_on(desc, &system)
}

/// [`run_bench`] on an already generated instance.
pub fn run_bench_on(desc: &BenchDescriptor, system: &SetSystem) -> Result<BenchTable> {
    let family = desc.generator.family();
    let d = desc.d.unwrap_or_else(|| desc.generator.default_potential_d());
    let mut jobs = Vec::new();
    for &t in &desc.t {
        for &method in &desc.algorithms {
            for s in 0..desc.seeds {
                jobs.push((t, method, desc.base_seed + s));
            }
        }
    }
    let rows: Result<Vec<BenchRow>> = jobs
        .into_par_iter()
        .map(|(t, method, seed)| match method {
            Method::Partition(algorithm) => {
                let mut params = PartitionParams::new(t, d, algorithm, seed)?.with_mode(desc.mode);
                params.w = desc.w;
                params.threads = desc.threads;
                let run = run_partition(system, &params)?;
                let mut row = BenchRow::from_report(family, &run.report, None);
                row.kappa = Some(crossing_number(system, &run.partition)?.kappa);
                if desc.epsilon {
                    row.epsilon = Some(eps_approx_from_partition(system, &run.partition, seed)?.epsilon);
                }
                Ok(row)
            }
            Method::Uniform => {
                let started = Instant::now();
                let sample = uniform_sample(system, t, seed)?;
                Ok(BenchRow {
                    family: family.to_string(),
                    n: system.n(),
                    m: system.m(),
                    d,
                    t,
                    algo: "uniform".into(),
                    w: None,
                    seed,
                    kappa: None,
                    violations_practical: None,
                    violations_theoretical: None,
                    runtime_ms: Some(started.elapsed().as_secs_f64() * 1e3),
                    epsilon: Some(sample.epsilon),
                })
            }
        })
        .collect();
    Ok(BenchTable { rows: rows? })
}
