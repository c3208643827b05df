use rayon::prelude::*;
use serde::Serialize;
use subpoint_core::verify::{verify_fixpoint, verify_grid, verify_order, verify_qvip, Effort, SuiteReport};

use crate::output::{csv_writer, prepare, write_summary};
use crate::{Common, UsageError};

#[derive(Clone, Copy, Debug)]
pub enum Suite {
    Order,
    Fixpoint,
    Qvip,
    Grid,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Order, Suite::Fixpoint, Suite::Qvip, Suite::Grid];

    fn run(self, seed: u64, effort: Effort) -> SuiteReport {
        match self {
            Suite::Order => verify_order(seed, effort),
            Suite::Fixpoint => verify_fixpoint(seed, effort),
            Suite::Qvip => verify_qvip(seed, effort),
            Suite::Grid => verify_grid(seed, effort),
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'static str,
    seed: u64,
    effort: Effort,
    all_passed: bool,
    checks_passed: usize,
    checks_failed: usize,
    suites: &'a [SuiteReport],
}

pub fn run(suites: &[Suite], seed: u64, quick: bool, common: &Common) -> Result<bool, UsageError> {
    prepare(&common.out)?;
    let effort = if quick { Effort::Quick } else { Effort::Full };
    // suites are independent; collect keeps the declared order
    let reports: Vec<SuiteReport> = suites.par_iter().map(|s| s.run(seed, effort)).collect();

    let (mut w, _) = csv_writer(&common.out, "checks.csv")?;
    w.write_record(["suite", "check", "samples", "passed", "failed", "counterexample"])?;
    for r in &reports {
        for c in &r.checks {
            let (samples, passed, failed) = (c.samples.to_string(), c.passed.to_string(), c.failed.to_string());
            let ce = c.counterexample.as_deref().unwrap_or("");
            w.write_record([r.suite.as_str(), &c.name, &samples, &passed, &failed, ce])?;
        }
    }
    w.flush()?;

    let checks = reports.iter().flat_map(|r| &r.checks);
    let failed = checks.clone().filter(|c| !c.ok()).count();
    let summary = Summary {
        command: if suites.len() == 1 { "verify" } else { "verify-all" },
        seed,
        effort,
        all_passed: failed == 0,
        checks_passed: checks.count() - failed,
        checks_failed: failed,
        suites: &reports,
    };
    write_summary(&common.out, &summary)?;

    for r in &reports {
        for c in &r.checks {
            let mark = if c.ok() { "ok  " } else { "FAIL" };
            println!("[{mark}] {}/{} {}/{}", r.suite, c.name, c.passed, c.samples);
        }
    }
    println!("{} passed, {} failed", summary.checks_passed, failed);
    if let Some(bad) = reports.iter().find_map(SuiteReport::first_failure) {
        eprintln!(
            "first counterexample ({}): {}",
            bad.name,
            bad.counterexample.as_deref().unwrap_or("no samples drawn")
        );
    }
    Ok(failed == 0)
}
