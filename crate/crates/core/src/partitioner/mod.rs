//! Greedy construction of balanced low-crossing partitions.
//!
//! Three strategies share one multiplicative-weights loop: every finished
//! part doubles the weight of the ranges crossing it, steering later parts
//! away from ranges that are already crossed often.
//!
//! - [`Algorithm::Greedy`] grows each part from a random start, adding the
//!   first element whose insertion cost keeps the part within the potential
//!   budget.
//! - [`Algorithm::MinWeight`] always adds the element of smallest cost.
//! - [`Algorithm::PartAtOnce`] estimates costs from `w` weighted range
//!   samples and takes the cheapest elements in one go.

mod potential;
mod weights;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::ThreadPoolBuilder;
use serde::{Deserialize, Serialize};

pub use potential::{potential_threshold, PotentialConfig, PotentialMode};
pub use weights::{Step, WeightState};

use crate::error::{Error, Result};
use crate::rng;
use crate::system::{crossing_number, Partition, SetSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(alias = "greedy-potential")]
    Greedy,
    #[serde(alias = "min-weight")]
    MinWeight,
    #[serde(alias = "part-at-once")]
    PartAtOnce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Greedy, Algorithm::MinWeight, Algorithm::PartAtOnce];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::MinWeight => "minweight",
            Algorithm::PartAtOnce => "partatonce",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" | "greedy-potential" => Ok(Algorithm::Greedy),
            "minweight" | "min-weight" => Ok(Algorithm::MinWeight),
            "partatonce" | "part-at-once" => Ok(Algorithm::PartAtOnce),
            other => Err(Error::arg(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Default number of range samples per part for [`Algorithm::PartAtOnce`]:
/// `max(30, ⌈t/2⌉)` on grid systems, `max(100, ⌈t/2⌉)` elsewhere.
pub fn default_w(t: usize, grid: bool) -> usize {
    let floor = if grid { 30 } else { 100 };
    floor.max(t.div_ceil(2))
}

#[derive(Debug, Clone)]
pub struct PartitionParams {
    pub t: usize,
    pub potential: PotentialConfig,
    pub algorithm: Algorithm,
    /// Range samples per part; `None` picks [`default_w`] from the system's
    /// family.
    pub w: Option<usize>,
    pub seed: u64,
    /// Workers for part-at-once; `None` uses every available core.
    pub threads: Option<usize>,
}

impl PartitionParams {
    pub fn new(t: usize, d: f64, algorithm: Algorithm, seed: u64) -> Result<Self> {
        Ok(PartitionParams {
            t,
            potential: PotentialConfig::new(d, PotentialMode::Practical, t)?,
            algorithm,
            w: None,
            seed,
            threads: None,
        })
    }

    pub fn with_w(mut self, w: usize) -> Self {
        self.w = Some(w);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_mode(mut self, mode: PotentialMode) -> Self {
        self.potential.mode = mode;
        self
    }

    fn effective_w(&self, system: &SetSystem) -> usize {
        let grid = system.provenance().is_some_and(|p| p.family == "grid");
        self.w.unwrap_or_else(|| default_w(self.t, grid))
    }
}

/// Summary of one partitioning run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub d: f64,
    /// Range samples per part; only set for part-at-once.
    pub w: Option<usize>,
    pub kappa: u32,
    /// Per part, the steps whose cost exceeded the practical budget.
    pub violations_practical: Vec<u32>,
    /// Per part, the steps whose cost exceeded the theoretical budget.
    pub violations_theoretical: Vec<u32>,
    pub runtime: Duration,
}

impl RunReport {
    pub fn total_violations_practical(&self) -> u64 {
        self.violations_practical.iter().map(|&v| v as u64).sum()
    }

    pub fn total_violations_theoretical(&self) -> u64 {
        self.violations_theoretical.iter().map(|&v| v as u64).sum()
    }
}

/// Everything a run produces, including the final range exponents.
#[derive(Debug, Clone)]
pub struct Run {
    pub partition: Partition,
    pub report: RunReport,
    /// Number of parts each range crosses, as tracked by the weight update.
    pub exponents: Vec<u32>,
}

/// Progress notifications from [`run_partition_observed`].
pub enum Progress<'s, 'a> {
    Started(&'s WeightState<'a>),
    Extended(&'s WeightState<'a>, Step),
    Finished(&'s WeightState<'a>, &'s [usize]),
}

/// Partitions `system` into `t` parts: `t - 1` of size `⌊n/t⌋` and a last
/// part holding the rest.
pub fn partition(system: &SetSystem, params: &PartitionParams) -> Result<(Partition, RunReport)> {
    let run = run_partition(system, params)?;
    Ok((run.partition, run.report))
}

pub fn run_partition(system: &SetSystem, params: &PartitionParams) -> Result<Run> {
    run_partition_observed(system, params, |_| {})
}

/// [`run_partition`] with a callback after every start, extension and
/// finished part.
pub fn run_partition_observed(
    system: &SetSystem,
    params: &PartitionParams,
    mut observe: impl FnMut(Progress<'_, '_>),
) -> Result<Run> {
    let (n, t) = (system.n(), params.t);
    if t == 0 || t > n {
        return Err(Error::arg(format!("part count t = {t} must lie in [1, {n}]")));
    }
    let w = params.effective_w(system);
    if params.algorithm == Algorithm::PartAtOnce && w == 0 {
        return Err(Error::arg("part-at-once needs w >= 1"));
    }
    let threads = params
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    let pool = match params.algorithm {
        Algorithm::PartAtOnce if threads > 1 => Some(
            ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::State(format!("thread pool: {e}")))?,
        ),
        _ => None,
    };

    let cfg = params.potential;
    let base = n / t;
    let mut rng = rng::seeded(params.seed);
    let mut state = WeightState::new(system);
    let mut part_of = vec![0u32; n];
    let mut violations_practical = vec![0u32; t];
    let mut violations_theoretical = vec![0u32; t];

    let started = Instant::now();
    for i in 0..t {
        let last = i + 1 == t;
        let part = match params.algorithm {
            Algorithm::Greedy | Algorithm::MinWeight => {
                state.begin_part(&mut rng)?;
                observe(Progress::Started(&state));
                for _ in 1..base {
                    let step = match params.algorithm {
                        Algorithm::Greedy => state.extend_greedy(&cfg)?,
                        _ => state.extend_minweight(&cfg)?,
                    };
                    violations_practical[i] += step.violates_practical as u32;
                    violations_theoretical[i] += step.violates_theoretical as u32;
                    observe(Progress::Extended(&state, step));
                }
                if last {
                    state.absorb_remaining()?;
                }
                state.part().to_vec()
            }
            Algorithm::PartAtOnce => {
                let size = if last { state.remaining_count() } else { base };
                state.build_part_at_once(size, w, &mut rng, pool.as_ref())?
            }
        };
        for &x in &part {
            part_of[x] = i as u32;
        }
        state.mwu_update(&part)?;
        observe(Progress::Finished(&state, &part));
    }
    let runtime = started.elapsed();

    let partition = Partition::new(part_of, t)?;
    let kappa = crossing_number(system, &partition)?.kappa;
    let report = RunReport {
        algorithm: params.algorithm,
        seed: params.seed,
        n,
        m: system.m(),
        t,
        d: cfg.d,
        w: (params.algorithm == Algorithm::PartAtOnce).then_some(w),
        kappa,
        violations_practical,
        violations_theoretical,
        runtime,
    };
    Ok(Run { partition, report, exponents: state.exponents().to_vec() })
}

/// `⌈log₂ n⌉` exponents spaced geometrically over `[1, n]`.
pub fn default_d_candidates(n: usize) -> Vec<f64> {
    let count = (n as f64).log2().ceil().max(1.0) as usize;
    if count == 1 {
        return vec![1.0];
    }
    (0..count).map(|j| (n as f64).powf(j as f64 / (count - 1) as f64)).collect()
}

/// Runs the partitioner once per candidate exponent with the same seed and
/// keeps the run of smallest crossing number (smaller `d` on ties).
pub fn search_d(system: &SetSystem, params: &PartitionParams, candidates: &[f64]) -> Result<(f64, Run)> {
    let mut best: Option<(f64, Run)> = None;
    for &d in candidates {
        let mut p = params.clone();
        p.potential = PotentialConfig::new(d, params.potential.mode, params.t)?;
        let run = run_partition(system, &p)?;
        let better = match &best {
            None => true,
            Some((best_d, best_run)) => {
                run.report.kappa < best_run.report.kappa || (run.report.kappa == best_run.report.kappa && d < *best_d)
            }
        };
        if better {
            best = Some((d, run));
        }
    }
    best.ok_or_else(|| Error::arg("d search needs at least one candidate"))
}
