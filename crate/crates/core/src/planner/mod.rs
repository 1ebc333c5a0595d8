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
//! Experience-driven random trees and the RRTConnect baseline.
//!
//! All planners share the same contract: a query whose start or goal is
//! invalid yields [`PlanStatus::InvalidQuery`], a search that runs out of
//! time or iterations yields [`PlanStatus::Timeout`], and a solved path is
//! valid at the configured resolution with exact start and goal endpoints.
//! Runs are deterministic for a fixed seed as long as the iteration budget,
//! or a [`ClockMode::Virtual`] clock, decides when to stop.

mod clock;
mod ert;
mod ertconnect;
mod params;
mod result;
mod rrtconnect;
mod segment;
mod trace;
mod tree;

pub use clock::{VIRTUAL_SECONDS_PER_CHECK, VIRTUAL_SECONDS_PER_ITERATION};
pub use ert::{ert_plan, ErtSearch};
pub use ertconnect::{ertconnect_plan, ErtConnectSearch, Meeting};
pub use params::{ClockMode, Epsilon, PlannerParams};
pub use result::{PlanResult, PlanStats, PlanStatus, RrtTree, SearchTrace, SolvedBy, StopReason};
pub use rrtconnect::rrtconnect_plan;
pub use segment::{connect_segment, explore_segment, generate_segment, morph_segment, sample_segment_end};
pub use trace::{trace_path, TracedPath, JUNCTION_TOLERANCE};
pub use tree::{ExperienceTree, Extension, TreeNode};

use serde::{Deserialize, Serialize};

use crate::experience::map_experience;
use crate::path::{PathExperience, PhasedState};
use crate::world::{QueryInstance, SegmentChecker};

use clock::Budget;

/// Planner selector used by the benchmark harness and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Ert,
    ErtConnect,
    RrtConnect,
}

impl PlannerKind {
    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Ert => "ert",
            PlannerKind::ErtConnect => "ertconnect",
            PlannerKind::RrtConnect => "rrtconnect",
        }
    }

    pub fn uses_experience(self) -> bool {
        !matches!(self, PlannerKind::RrtConnect)
    }

    /// Runs this planner. The prior is ignored by the baseline.
    pub fn plan(self, query: &QueryInstance, prior: Option<&PathExperience>, params: &PlannerParams) -> PlanResult {
        match (self, prior) {
            (PlannerKind::RrtConnect, _) => rrtconnect_plan(query, params),
            (PlannerKind::Ert, Some(p)) => ert_plan(query, p, params),
            (PlannerKind::ErtConnect, Some(p)) => ertconnect_plan(query, p, params),
            (_, None) => PlanResult::invalid(PlanStats::default()),
        }
    }
}

impl std::str::FromStr for PlannerKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ert" => Ok(PlannerKind::Ert),
            "ertconnect" => Ok(PlannerKind::ErtConnect),
            "rrtconnect" => Ok(PlannerKind::RrtConnect),
            other => Err(crate::Error::invalid(format!("unknown planner '{other}'"))),
        }
    }
}

impl std::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Solutions are re-checked this many times finer than the planning
/// resolution before they are returned. Discrete checks at `delta` can let
/// an edge clip an obstacle corner by less than `delta`; candidates that
/// fail the finer pass are dropped and the search goes on.
pub const CERTIFY_FACTOR: f64 = 10.0;

pub(crate) fn certify(checker: &mut SegmentChecker, states: &[PhasedState]) -> bool {
    let finer = checker.delta() / CERTIFY_FACTOR;
    checker.recheck(states, finer)
}

pub(crate) fn resolution(query: &QueryInstance, params: &PlannerParams) -> f64 {
    params.delta.unwrap_or_else(|| query.world.default_delta())
}

/// State shared by the experience-driven planners once the query has been
/// accepted and the prior mapped.
pub(crate) struct Prepared<'a> {
    pub budget: Budget,
    pub checker: SegmentChecker<'a>,
    pub mapped: PathExperience,
}

/// Validates the query, maps the prior and tries it as-is. Returns the
/// finished result when no search is needed.
// the large error side is the finished result, returned once per plan
#[allow(clippy::result_large_err)]
pub(crate) fn prepare<'a>(
    query: &'a QueryInstance,
    prior: &PathExperience,
    params: &PlannerParams,
) -> Result<Prepared<'a>, PlanResult> {
    let budget = Budget::start(params.clock, params.timeout, params.max_iterations);
    let n = query.world.dim();
    let well_formed = params.validate().is_ok()
        && params.epsilon.resolve(n).is_ok()
        && prior.dim() == n
        && query.q_start.dim() == n
        && query.q_goal.dim() == n
        && query.q_start != query.q_goal;
    if !well_formed {
        return Err(PlanResult::invalid(PlanStats::default()));
    }
    let mut checker = SegmentChecker::new(&query.world, resolution(query, params));
    if !(checker.state(&query.q_start) && checker.state(&query.q_goal)) {
        let stats = PlanStats {
            validity_checks: checker.checks(),
            elapsed_seconds: budget.elapsed(checker.checks(), 0),
            ..Default::default()
        };
        return Err(PlanResult::invalid(stats));
    }
    let mapped = map_experience(prior, &query.q_start, &query.q_goal).expect("dimensions checked above");
    if checker.states(mapped.states()) && certify(&mut checker, mapped.states()) {
        let source = mapped.states().to_vec();
        let stats = PlanStats {
            validity_checks: checker.checks(),
            elapsed_seconds: budget.elapsed(checker.checks(), 0),
            solved_by: Some(SolvedBy::PriorValid),
            ..Default::default()
        };
        return Err(PlanResult {
            status: PlanStatus::Solved,
            path: Some(mapped.clone()),
            stats,
            search: SearchTrace {
                mapped_prior: Some(mapped),
                source_states: Some(source),
                ..Default::default()
            },
        });
    }
    Ok(Prepared {
        budget,
        checker,
        mapped,
    })
}
