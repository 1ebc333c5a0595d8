/*
Copyright 2026 The ertkit Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experience::{select_experience, ExperienceLibrary};
use crate::path::PathExperience;
use crate::planner::{PlanStatus, PlannerKind, PlannerParams};
use crate::world::QueryInstance;

use super::mix_seed;

pub const CSV_HEADER: [&str; 9] = [
    "scenario",
    "planner",
    "lib_size",
    "rep",
    "seed",
    "status",
    "elapsed_s",
    "iterations",
    "validity_checks",
];

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ERTKIT_THREADS";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub planners: Vec<PlannerKind>,
    pub library_sizes: Vec<usize>,
    pub repetitions: usize,
    pub params: PlannerParams,
    /// Worker threads; `None` reads `ERTKIT_THREADS`, falling back to the
    /// number of cores.
    pub threads: Option<usize>,
}

/// One planning run. `path` and `selection_seconds` are kept for auditing
/// and summaries but are not part of the CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkRecord {
    pub instance: usize,
    pub scenario: String,
    pub planner: PlannerKind,
    pub lib_size: usize,
    pub rep: usize,
    pub seed: u64,
    pub status: PlanStatus,
    pub elapsed_s: f64,
    pub iterations: u64,
    pub validity_checks: u64,
    pub selection_seconds: f64,
    #[serde(skip)]
    pub path: Option<PathExperience>,
}

impl BenchmarkRecord {
    fn sort_key(&self) -> (usize, PlannerKind, usize, usize) {
        (self.instance, self.planner, self.lib_size, self.rep)
    }

    pub fn csv_row(&self) -> [String; 9] {
        [
            self.scenario.clone(),
            self.planner.name().to_string(),
            self.lib_size.to_string(),
            self.rep.to_string(),
            self.seed.to_string(),
            self.status.as_str().to_string(),
            self.elapsed_s.to_string(),
            self.iterations.to_string(),
            self.validity_checks.to_string(),
        ]
    }
}

struct Job {
    instance: usize,
    planner: PlannerKind,
    lib_size: usize,
    rep: usize,
}

fn thread_count(cfg: &BenchConfig) -> usize {
    cfg.threads
        .or_else(|| std::env::var(THREADS_ENV).ok()?.trim().parse().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every (instance, planner, library prefix, repetition) combination.
/// The baseline ignores the library and runs once per repetition with
/// `lib_size = 0`. Records come back sorted, independent of scheduling.
pub fn run_benchmark(
    suite: &[QueryInstance],
    library: &ExperienceLibrary,
    cfg: &BenchConfig,
) -> Result<Vec<BenchmarkRecord>> {
    cfg.params.validate()?;
    let uses_library = cfg.planners.iter().any(|p| p.uses_experience());
    if uses_library {
        let max = cfg.library_sizes.iter().copied().max().unwrap_or(0);
        if cfg.library_sizes.is_empty() || cfg.library_sizes.contains(&0) {
            return Err(Error::invalid("library sizes must be positive"));
        }
        if max > library.len() {
            return Err(Error::invalid(format!(
                "library has {} experiences, {max} requested",
                library.len()
            )));
        }
    }
    let mut planners = cfg.planners.clone();
    planners.sort();
    planners.dedup();
    let mut sizes = cfg.library_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();

    // Planner-major order keeps each planner's runs together, so one
    // planner's memory churn does not land on another's timings.
    let mut jobs = Vec::new();
    for &planner in &planners {
        let planner_sizes = if planner.uses_experience() { sizes.clone() } else { vec![0] };
        for &lib_size in &planner_sizes {
            for instance in 0..suite.len() {
                for rep in 0..cfg.repetitions {
                    jobs.push(Job {
                        instance,
                        planner,
                        lib_size,
                        rep,
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cfg))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let mut records = pool.install(|| {
        jobs.par_iter()
            .map(|job| run_one(suite, library, cfg, job))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(BenchmarkRecord::sort_key);
    Ok(records)
}

fn run_one(
    suite: &[QueryInstance],
    library: &ExperienceLibrary,
    cfg: &BenchConfig,
    job: &Job,
) -> Result<BenchmarkRecord> {
    let query = &suite[job.instance];
    let seed = mix_seed(&[
        cfg.params.seed,
        job.instance as u64,
        job.planner as u64,
        job.lib_size as u64,
        job.rep as u64,
    ]);
    let params = PlannerParams {
        seed,
        ..cfg.params.clone()
    };
    let (prior, selection_seconds) = if job.planner.uses_experience() {
        let t = Instant::now();
        let (_, xi) = select_experience(library.prefix(job.lib_size), &query.q_start, &query.q_goal)?;
        (Some(xi), t.elapsed().as_secs_f64())
    } else {
        (None, 0.0)
    };
    let result = job.planner.plan(query, prior, &params);
    Ok(BenchmarkRecord {
        instance: job.instance,
        scenario: query.label.clone(),
        planner: job.planner,
        lib_size: job.lib_size,
        rep: job.rep,
        seed,
        status: result.status,
        elapsed_s: result.stats.elapsed_seconds,
        iterations: result.stats.iterations,
        validity_checks: result.stats.validity_checks,
        selection_seconds,
        path: result.path,
    })
}

/// Writes records as CSV with the fixed header.
pub fn write_csv<W: Write>(out: W, records: &[BenchmarkRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// CSV rendering of `records` as bytes.
pub fn csv_bytes(records: &[BenchmarkRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(buf)
}
