//! Randomised and exhaustive property suites with pass/fail tallies.

use std::time::{Duration, Instant};

use serde::Serialize;

mod fixpoint;
mod grid;
mod order;
mod qvip;

pub use fixpoint::verify_fixpoint;
pub use grid::{
    compensator_check, extremality_check, preset_smoke_check, random_sandwich_instance, sandwich_check, verify_grid,
    SandwichInstance,
};
pub use order::verify_order;
pub use qvip::verify_qvip;

/// How many random samples a suite draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Effort {
    /// Sample counts used for acceptance.
    Full,
    /// Small counts for smoke runs.
    Quick,
}

impl Effort {
    pub(crate) fn pick(self, full: usize, quick: usize) -> usize {
        match self {
            Effort::Full => full,
            Effort::Quick => quick,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub samples: u64,
    pub passed: u64,
    pub failed: u64,
    /// First failing sample, rendered for humans.
    pub counterexample: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.samples > 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::ok)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.ok())
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Running tally for one check.
pub(crate) struct Tally {
    name: String,
    samples: u64,
    failed: u64,
    counterexample: Option<String>,
    start: Instant,
}

impl Tally {
    pub(crate) fn new(name: &str) -> Self {
        Tally { name: name.to_string(), samples: 0, failed: 0, counterexample: None, start: Instant::now() }
    }

    pub(crate) fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(describe());
            }
        }
    }

    pub(crate) fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            samples: self.samples,
            passed: self.samples - self.failed,
            failed: self.failed,
            counterexample: self.counterexample,
            elapsed: self.start.elapsed(),
        }
    }
}
