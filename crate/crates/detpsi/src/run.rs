//! Run configurations and their execution.

use std::time::Instant;

use detpsi_core::local::MonomialPrime;
use detpsi_core::report::{stamp_timing, CheckResult};
use detpsi_core::ring::{Ring, RingSpec};
use detpsi_core::scenario::{
    appendix_sample, generate_scenario, psi_sample_checks, verify_chern, verify_l1_sequence, verify_main_sequence, Scenario,
    ScenarioFile, ScenarioParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::Report;
use crate::RunError;

/// Where the scenarios of a run come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioSource {
    /// Scenarios with seeds `seed, seed + 1, …, seed + count − 1`.
    Generated { params: ScenarioParams, seed: u64, count: usize },
    /// A scenario read from a file, embedded verbatim.
    File { scenario: Box<ScenarioFile> },
}

/// The suite to run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    PsiSuite {
        ring: RingSpec,
        seed: u64,
        count: usize,
        /// Primes as comma-separated variable names; all monomial primes of
        /// height ≤ 2 when absent.
        #[serde(default)]
        primes: Option<Vec<String>>,
    },
    Appendix {
        ring: RingSpec,
        seed: u64,
        count: usize,
    },
    MainSeq {
        source: ScenarioSource,
        #[serde(default)]
        primes: Option<Vec<String>>,
    },
    L1Seq {
        source: ScenarioSource,
    },
    Chern {
        source: ScenarioSource,
    },
}

/// Everything that determines the verdicts of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: Task,
    pub max_resample: usize,
}

fn parse_primes(ring: &Ring, primes: &Option<Vec<String>>) -> Result<Option<Vec<MonomialPrime>>, RunError> {
    primes
        .as_ref()
        .map(|ps| ps.iter().map(|p| MonomialPrime::parse(ring, p)).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(|e| RunError::Config(e.to_string()))
}

/// Runs `f` on every index in parallel, stamping each batch with its time,
/// and concatenates the batches in index order.
fn par_batches<F>(count: usize, f: F) -> Vec<CheckResult>
where
    F: Fn(usize) -> Vec<CheckResult> + Sync,
{
    let batches: Vec<Vec<CheckResult>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let mut checks = f(i);
            stamp_timing(&mut checks, "task_ms", start.elapsed().as_secs_f64() * 1e3);
            checks
        })
        .collect();
    batches.into_iter().flatten().collect()
}

/// Generates scenario `seed` or reports the failure as a failing check.
pub fn generate(params: &ScenarioParams, seed: u64) -> Result<Scenario, Box<CheckResult>> {
    generate_scenario(seed, params).map_err(|e| {
        Box::new(CheckResult::fail("scenario.generate", &format!("scenario-{seed}"), format!("generation failed: {e}")))
    })
}

enum Scenarios {
    Generated(ScenarioParams, u64, usize),
    One(Box<Scenario>),
}

impl Scenarios {
    fn new(source: &ScenarioSource, max_resample: usize) -> Result<Self, RunError> {
        match source {
            ScenarioSource::Generated { params, seed, count } => {
                let mut params = params.clone();
                params.max_resample = max_resample;
                Ok(Scenarios::Generated(params, *seed, *count))
            }
            ScenarioSource::File { scenario } => Ok(Scenarios::One(Box::new(Scenario::from_file(scenario)?))),
        }
    }

    fn len(&self) -> usize {
        match self {
            Scenarios::Generated(_, _, c) => *c,
            Scenarios::One(_) => 1,
        }
    }

    fn l(&self) -> usize {
        match self {
            Scenarios::Generated(p, _, _) => p.l(),
            Scenarios::One(s) => s.l,
        }
    }

    fn ring_spec(&self) -> RingSpec {
        match self {
            Scenarios::Generated(p, _, _) => p.ring_spec(),
            Scenarios::One(s) => s.ring.spec().clone(),
        }
    }

    /// Runs `f` on scenario `i`.
    fn with(&self, i: usize, f: impl Fn(&Scenario) -> Vec<CheckResult>) -> Vec<CheckResult> {
        match self {
            Scenarios::Generated(p, seed, _) => match generate(p, seed + i as u64) {
                Ok(s) => f(&s),
                Err(c) => vec![*c],
            },
            Scenarios::One(s) => f(s),
        }
    }
}

fn run_checks(config: &RunConfig) -> Result<Vec<CheckResult>, RunError> {
    let budget = config.max_resample;
    match &config.task {
        Task::PsiSuite { ring, seed, count, primes } => {
            let ring = Ring::new(ring.clone())?;
            let primes = parse_primes(&ring, primes)?;
            Ok(par_batches(*count, |i| psi_sample_checks(&ring, *seed, i, primes.as_deref(), budget)))
        }
        Task::Appendix { ring, seed, count } => {
            let ring = Ring::new(ring.clone())?;
            Ok(par_batches(*count, |i| appendix_sample(&ring, *seed, i, budget)))
        }
        Task::MainSeq { source, primes } => {
            let sc = Scenarios::new(source, budget)?;
            let ring = Ring::new(sc.ring_spec())?;
            let primes = parse_primes(&ring, primes)?;
            Ok(par_batches(sc.len(), |i| sc.with(i, |s| verify_main_sequence(s, primes.as_deref()))))
        }
        Task::L1Seq { source } => {
            let sc = Scenarios::new(source, budget)?;
            if sc.l() != 1 {
                return Err(RunError::Config(format!("l1-seq needs l = 1, the scenarios have l = {}", sc.l())));
            }
            Ok(par_batches(sc.len(), |i| {
                sc.with(i, |s| {
                    verify_l1_sequence(s)
                        .unwrap_or_else(|e| vec![CheckResult::fail("l1.sequence", &s.id(), format!("computation error: {e}"))])
                })
            }))
        }
        Task::Chern { source } => {
            let sc = Scenarios::new(source, budget)?;
            Ok(par_batches(sc.len(), |i| sc.with(i, verify_chern)))
        }
    }
}

/// Executes a configuration on `jobs` worker threads (rayon's default when
/// `None`).
pub fn run(config: &RunConfig, jobs: Option<usize>) -> Result<Report, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    let start = Instant::now();
    let checks = pool.install(|| run_checks(config))?;
    Ok(Report::new(config.clone(), checks, start.elapsed().as_secs_f64() * 1e3))
}
