use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{gen_instance, InstanceSpec};
use super::rng::{RngInfo, RNG_INFO};
use super::verify::{mutate, verify_bundle, verify_principal, verify_pullback, Outcome};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Pullback,
    Bundle,
    Principal,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Pullback, Suite::Bundle, Suite::Principal];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pullback => "pullback",
            Suite::Bundle => "bundle",
            Suite::Principal => "principal",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// The bundle suite draws from groupoids only.
    pub fn adjust(self, spec: InstanceSpec) -> InstanceSpec {
        match self {
            Suite::Bundle => InstanceSpec {
                groupoid_only: true,
                ..spec
            },
            _ => spec,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Bounds; `spec.seed` is the first seed.
    pub spec: InstanceSpec,
    pub seeds: usize,
    /// Break every instance first; all outcomes should be invalid input.
    pub negative_control: bool,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seeds: usize,
    pub first_seed: u64,
    pub spec: InstanceSpec,
    pub negative_control: bool,
    pub passes: usize,
    pub checks: usize,
    pub invalid_inputs: Vec<SeedOutcome>,
    pub failures: Vec<SeedOutcome>,
    /// Seconds; omitted when timing is off so reports are reproducible.
    pub wall_time: Option<f64>,
    pub rng: RngInfo,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_seed(suite: Suite, spec: &InstanceSpec, negative_control: bool) -> Outcome {
    let spec = suite.adjust(*spec);
    let mut inst = match gen_instance(&spec) {
        Ok(inst) => inst,
        Err(e) => return Outcome::Violation { reason: format!("generation failed: {e}") },
    };
    if negative_control {
        if let Some(bad) = mutate(&inst) {
            inst.bundle = bad;
        }
    }
    match suite {
        Suite::Pullback => verify_pullback(&inst),
        Suite::Bundle => verify_bundle(&inst),
        Suite::Principal => verify_principal(&inst),
    }
}

/// Runs the seeds `first, first + 1, …` in parallel; the report lists
/// results in seed order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.spec.check()?;
    if cfg.seeds == 0 {
        return Err(Error::Precondition("a suite needs at least one seed".into()));
    }
    let start = Instant::now();
    let first = cfg.spec.seed;
    let outcomes: Vec<SeedOutcome> = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|k| {
            let seed = first.wrapping_add(k);
            SeedOutcome {
                seed,
                outcome: run_seed(cfg.suite, &cfg.spec.with_seed(seed), cfg.negative_control),
            }
        })
        .collect();
    let mut report = SuiteReport {
        suite: cfg.suite.name(),
        seeds: cfg.seeds,
        first_seed: first,
        spec: cfg.suite.adjust(cfg.spec),
        negative_control: cfg.negative_control,
        passes: 0,
        checks: 0,
        invalid_inputs: Vec::new(),
        failures: Vec::new(),
        wall_time: None,
        rng: RNG_INFO,
    };
    for o in outcomes {
        match o.outcome {
            Outcome::Pass { checks } => {
                report.passes += 1;
                report.checks += checks;
            }
            Outcome::InvalidInput { .. } => report.invalid_inputs.push(o),
            Outcome::Violation { .. } => report.failures.push(o),
        }
    }
    if cfg.timing {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}
