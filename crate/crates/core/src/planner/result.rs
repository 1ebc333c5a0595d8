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
use serde::{Deserialize, Serialize};

use crate::path::{Configuration, PathExperience, PhasedState};

use super::tree::ExperienceTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Solved,
    Timeout,
    InvalidQuery,
}

impl PlanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PlanStatus::Solved => "solved",
            PlanStatus::Timeout => "timeout",
            PlanStatus::InvalidQuery => "invalid_query",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvedBy {
    PriorValid,
    TreeSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Timeout,
    MaxIterations,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanStats {
    pub iterations: u64,
    pub validity_checks: u64,
    pub tree_sizes: Vec<usize>,
    pub elapsed_seconds: f64,
    pub solved_by: Option<SolvedBy>,
    pub stopped_by: Option<StopReason>,
}

/// Plain RRT tree kept for inspection and rendering.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RrtTree {
    pub nodes: Vec<Configuration>,
    pub parents: Vec<Option<usize>>,
}

/// Search internals returned alongside a result; not serialized.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchTrace {
    pub mapped_prior: Option<PathExperience>,
    pub trees: Vec<ExperienceTree>,
    pub rrt_trees: Vec<RrtTree>,
    /// Waypoints of the returned path with the phases they had on the
    /// mapped prior, before arc-length reparametrization.
    pub source_states: Option<Vec<PhasedState>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub path: Option<PathExperience>,
    pub stats: PlanStats,
    #[serde(skip)]
    pub search: SearchTrace,
}

impl PlanResult {
    pub(crate) fn invalid(stats: PlanStats) -> Self {
        Self {
            status: PlanStatus::InvalidQuery,
            path: None,
            stats,
            search: SearchTrace::default(),
        }
    }

    pub fn is_solved(&self) -> bool {
        self.status == PlanStatus::Solved
    }
}
