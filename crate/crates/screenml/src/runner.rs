//! Repeat-parallel experiment execution.
//!
//! Repeats are independent and seeded by index, so workers may pick them up
//! in any order; outcomes are reassembled by index and the report is the
//! same for any worker count.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use screenml_core::evaluation::{assemble_report, run_repeat, PreparedCorpus, RepeatOutcome};
use screenml_core::{Corpus, ExperimentConfig, ExperimentReport, StopList};

use crate::error::{Error, Result};

pub const WORKERS_ENV: &str = "SCREENML_WORKERS";

/// Worker count from `SCREENML_WORKERS`, else the available parallelism.
pub fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<NonZeroUsize>()
            .map(NonZeroUsize::get)
            .map_err(|_| {
                Error::Usage(format!(
                    "{WORKERS_ENV} must be a positive integer, got `{v}`"
                ))
            }),
        _ => Ok(thread::available_parallelism().map_or(1, NonZeroUsize::get)),
    }
}

pub fn run_experiment(
    config: &ExperimentConfig,
    corpus: &Corpus,
    stoplist: &StopList,
    workers: usize,
) -> Result<ExperimentReport> {
    config.validate()?;
    let prepared = PreparedCorpus::new(corpus, stoplist)?;
    let workers = workers.clamp(1, config.repeats);
    let outcomes = if workers == 1 {
        (0..config.repeats)
            .map(|r| run_repeat(config, &prepared, r))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        run_parallel(config, &prepared, workers)?
    };
    for o in outcomes.iter().filter(|o| o.retries > 0) {
        log::info!(
            "repeat {} re-drew its split {} time(s)",
            o.repeat,
            o.retries
        );
    }
    Ok(assemble_report(config, corpus, outcomes)?)
}

fn run_parallel(
    config: &ExperimentConfig,
    prepared: &PreparedCorpus,
    workers: usize,
) -> Result<Vec<RepeatOutcome>> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<screenml_core::Result<RepeatOutcome>>>> =
        Mutex::new(vec![None; config.repeats]);
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let r = next.fetch_add(1, Ordering::Relaxed);
                if r >= config.repeats {
                    break;
                }
                let outcome = run_repeat(config, prepared, r);
                let failed = outcome.is_err();
                results.lock().expect("result slots")[r] = Some(outcome);
                if failed {
                    // Let the other workers drain quickly.
                    next.store(config.repeats, Ordering::Relaxed);
                    break;
                }
            });
        }
    });
    let results = results.into_inner().expect("result slots");
    // Report the lowest-index failure so errors do not depend on scheduling.
    if let Some(Err(e)) = results.iter().flatten().find(|r| r.is_err()) {
        return Err(e.clone().into());
    }
    Ok(results
        .into_iter()
        .map(|r| r.expect("every repeat ran").expect("checked above"))
        .collect())
}
