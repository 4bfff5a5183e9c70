//! Seed-batch execution: independent runs fanned out over a bounded worker
//! pool, collected order-independently, failures contained per run.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::config::RunConfig;
use super::runner::{run_single, RunResult};
use crate::error::{Error, Result};

/// (problem, variant label, seed) key for one run.
pub type RunKey = (String, String, u64);

/// Outcome of a batch: finished runs keyed by (problem, variant, seed),
/// plus per-run failures that did not stop the rest.
#[derive(Debug, Default)]
pub struct BatchOutcome {
    pub results: BTreeMap<RunKey, RunResult>,
    pub failures: Vec<(RunKey, String)>,
}

impl BatchOutcome {
    /// Final IGD samples per (problem, variant), seeds in ascending order.
    pub fn igd_samples(&self) -> BTreeMap<(String, String), Vec<f64>> {
        let mut map: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
        for ((problem, variant, _), result) in &self.results {
            map.entry((problem.clone(), variant.clone()))
                .or_default()
                .push(result.final_igd);
        }
        map
    }
}

/// Runs every (template, seed) cell independently; `parallelism` bounds the
/// worker count. Identical inputs give identical outcomes regardless of
/// `parallelism`, since each run derives its RNG from its own key.
pub fn run_batch(templates: &[RunConfig], seeds: u64, parallelism: usize) -> Result<BatchOutcome> {
    if seeds == 0 {
        return Err(Error::Config("seed count must be >= 1".into()));
    }
    if templates.is_empty() {
        return Err(Error::Config("batch has no run templates".into()));
    }
    for t in templates {
        t.validate()?;
    }

    // Front caches are shared across runs; warm them up front so parallel
    // workers only ever read. A template whose warm-up fails is recorded as
    // one failure per seed and its runs are skipped; the batch continues.
    let mut outcome = BatchOutcome::default();
    let mut jobs: Vec<RunConfig> = Vec::with_capacity(templates.len() * seeds as usize);
    for template in templates {
        let warmed = crate::problems::builtin(&template.problem)
            .ok_or_else(|| Error::Config(format!("unknown problem `{}`", template.problem)))
            .and_then(|problem| {
                crate::problems::load_or_generate_front(
                    &template.fronts_dir,
                    problem.as_ref(),
                    template.front_size,
                    false,
                )
            });
        match warmed {
            Ok(_) => {
                for seed in 0..seeds {
                    let mut config = template.clone();
                    config.seed = seed;
                    jobs.push(config);
                }
            }
            Err(e) => {
                for seed in 0..seeds {
                    let key = (template.problem.clone(), template.variant.label(), seed);
                    outcome.failures.push((key, e.to_string()));
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let runs: Vec<(RunKey, std::result::Result<RunResult, String>)> = pool.install(|| {
        jobs.par_iter()
            .map(|config| {
                let key = (
                    config.problem.clone(),
                    config.variant.label(),
                    config.seed,
                );
                (key, run_single(config).map_err(|e| e.to_string()))
            })
            .collect()
    });

    for (key, run) in runs {
        match run {
            Ok(result) => {
                outcome.results.insert(key, result);
            }
            Err(message) => outcome.failures.push((key, message)),
        }
    }
    outcome.failures.sort();
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Variant;
    use std::path::Path;

    fn tiny_template(problem: &str, variant: Variant, dir: &Path) -> RunConfig {
        let mut rc = RunConfig::new(problem, variant);
        rc.pop_size = 12;
        rc.fe_max = 12 * 6;
        rc.front_size = 80;
        rc.fronts_dir = dir.join("fronts");
        rc.agent.batch_size = 4;
        rc.agent.replay_capacity = 32;
        rc.agent.hidden_width = 8;
        rc
    }

    #[test]
    fn batch_produces_one_result_per_cell_and_seed() {
        let dir = tempfile::tempdir().unwrap();
        let templates = vec![
            tiny_template("bnh", Variant::GaOnly, dir.path()),
            tiny_template("bnh", Variant::Aop, dir.path()),
        ];
        let outcome = run_batch(&templates, 3, 2).unwrap();
        assert_eq!(outcome.results.len(), 6);
        assert!(outcome.failures.is_empty());
        let samples = outcome.igd_samples();
        assert_eq!(samples[&("bnh".into(), "ga-only".into())].len(), 3);
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let dir = tempfile::tempdir().unwrap();
        let templates = vec![
            tiny_template("constr", Variant::DeRandOnly, dir.path()),
            tiny_template("constr", Variant::DeBestOnly, dir.path()),
        ];
        let serial = run_batch(&templates, 2, 1).unwrap();
        let parallel = run_batch(&templates, 2, 8).unwrap();
        assert_eq!(serial.results.len(), parallel.results.len());
        for (key, a) in &serial.results {
            let b = &parallel.results[key];
            assert_eq!(a.final_igd, b.final_igd);
            assert_eq!(
                crate::harness::runner::trace_csv(&a.trace),
                crate::harness::runner::trace_csv(&b.trace)
            );
        }
    }

    #[test]
    fn zero_seeds_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let templates = vec![tiny_template("bnh", Variant::GaOnly, dir.path())];
        assert!(run_batch(&templates, 0, 1).is_err());
    }

    #[test]
    fn one_failing_cell_does_not_stop_the_batch() {
        let dir = tempfile::tempdir().unwrap();
        // A regular file where a directory is needed makes the front cache
        // unwritable for the second template only.
        let blocked = dir.path().join("blocked");
        std::fs::write(&blocked, "not a directory").unwrap();
        let mut bad = tiny_template("tnk", Variant::GaOnly, dir.path());
        bad.fronts_dir = blocked.join("fronts");
        let templates = vec![tiny_template("bnh", Variant::GaOnly, dir.path()), bad];

        let outcome = run_batch(&templates, 2, 2).unwrap();
        assert_eq!(outcome.results.len(), 2, "healthy cell completes");
        assert_eq!(outcome.failures.len(), 2, "one failure per skipped seed");
        for ((problem, _, _), message) in &outcome.failures {
            assert_eq!(problem, "tnk");
            assert!(!message.is_empty());
        }
    }
}
