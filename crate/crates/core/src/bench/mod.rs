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
//! Benchmark harness: scenario suites, experience libraries, runs and
//! summaries.

mod run;
mod scenario;
mod summary;

pub use run::{csv_bytes, run_benchmark, write_csv, BenchConfig, BenchmarkRecord, CSV_HEADER, THREADS_ENV};
pub use scenario::{
    generate_scenarios, scenario_set, scenario_tier, RobotTemplate, ScenarioSpec, ShelfTemplate,
};
pub use summary::{summarize, SummaryRow};

use crate::error::{Error, Result};
use crate::experience::ExperienceLibrary;
use crate::planner::{rrtconnect_plan, PlannerParams};

/// Salt separating library-generation instances from evaluation suites.
const GENERATOR_SALT: u64 = 0x6578_7065_7269_656e;

/// Folds several words into one well-mixed 64-bit seed (splitmix64 finalizer).
pub fn mix_seed(words: &[u64]) -> u64 {
    let mut h: u64 = 0x243f_6a88_85a3_08d3;
    for w in words {
        h ^= *w;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

/// Obstacle-free, middle-tier generator suite used to build libraries. Its
/// seed stream is salted so it never coincides with an evaluation suite.
pub fn generator_spec(count: usize, seed: u64) -> Result<ScenarioSpec> {
    ScenarioSpec::new(1, count, mix_seed(&[seed, GENERATOR_SALT]))
}

/// Solves `count` generator instances with RRTConnect and keeps the paths.
/// `template` supplies the robot and shelf geometry; its set and seed are
/// replaced so the generator instances are always obstacle-free and
/// middle-tier.
pub fn build_experience_library(
    count: usize,
    seed: u64,
    template: &ScenarioSpec,
    params: &PlannerParams,
) -> Result<ExperienceLibrary> {
    if count == 0 {
        return Err(Error::invalid("library size must be positive"));
    }
    let mut spec = generator_spec(count, seed)?;
    spec.robot = template.robot.clone();
    spec.shelf.tiers = template.shelf.tiers;
    spec.shelf.tier_height = template.shelf.tier_height;
    spec.shelf.depth = template.shelf.depth;
    spec.shelf.front_x = template.shelf.front_x;
    spec.shelf.bottom_y = template.shelf.bottom_y;
    spec.shelf.slab_thickness = template.shelf.slab_thickness;
    spec.shelf.start = template.shelf.start;
    spec.shelf.target_tiers = vec![spec.shelf.middle_tier()];
    let suite = generate_scenarios(&spec)?;
    let mut library = ExperienceLibrary::default();
    for (i, query) in suite.iter().enumerate() {
        let run = PlannerParams {
            seed: mix_seed(&[params.seed, seed, i as u64]),
            ..params.clone()
        };
        match rrtconnect_plan(query, &run).path {
            Some(path) => library.push(path)?,
            None => return Err(Error::GenerationFailed(i)),
        }
    }
    Ok(library)
}
