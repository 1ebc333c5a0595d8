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
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::path::{Direction, PathExperience, PhasedState};
use crate::world::{QueryInstance, SegmentChecker};

use super::result::{PlanResult, PlanStats, PlanStatus, SearchTrace, SolvedBy};
use super::segment::generate_segment;
use super::trace::trace_path;
use super::tree::{ExperienceTree, Extension};
use super::{certify, prepare, PlannerParams};

/// Uni-directional search state, advanced one iteration at a time.
pub struct ErtSearch<'a> {
    mapped: PathExperience,
    goal: PhasedState,
    tree: ExperienceTree,
    params: &'a PlannerParams,
    rng: ChaCha8Rng,
    checker: SegmentChecker<'a>,
    iterations: u64,
}

impl<'a> ErtSearch<'a> {
    /// Starts a tree at the query start over an already mapped prior.
    pub fn new(query: &QueryInstance, mapped: PathExperience, checker: SegmentChecker<'a>, params: &'a PlannerParams) -> Self {
        let root = PhasedState {
            q: query.q_start.clone(),
            alpha: 0.0,
        };
        Self {
            mapped,
            goal: PhasedState {
                q: query.q_goal.clone(),
                alpha: 1.0,
            },
            tree: ExperienceTree::new(root, Direction::Forward),
            params,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            checker,
            iterations: 0,
        }
    }

    pub fn tree(&self) -> &ExperienceTree {
        &self.tree
    }

    pub fn mapped_prior(&self) -> &PathExperience {
        &self.mapped
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn validity_checks(&self) -> u64 {
        self.checker.checks()
    }

    /// One select / generate / extend round. Returns the goal node when a
    /// goal-connect segment was added and the branch to it passes the finer
    /// certification check.
    pub fn step(&mut self) -> Result<Option<usize>> {
        self.iterations += 1;
        let from = self.tree.select_node(&mut self.rng);
        let s_init = self.tree.node(from).state.clone();
        let attempt_goal = self.rng.gen::<f64>() < self.params.p;
        let target = attempt_goal.then_some(&self.goal);
        let generated = generate_segment(&s_init, target, &self.mapped, Direction::Forward, self.params, &mut self.rng);
        let psi = match generated {
            Ok((psi, _)) => psi,
            Err(Error::DegenerateSpan(_) | Error::DegenerateSegment(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        match self.tree.extend(psi, from, &mut self.checker)? {
            Extension::Advanced(leaf) if attempt_goal => {
                let branch = self.tree.branch_states(leaf);
                Ok(certify(&mut self.checker, &branch).then_some(leaf))
            }
            _ => Ok(None),
        }
    }
}

/// Plans with a single forward tree grown from morphed slices of the prior.
pub fn ert_plan(query: &QueryInstance, xi_d: &PathExperience, params: &PlannerParams) -> PlanResult {
    let prep = match prepare(query, xi_d, params) {
        Ok(p) => p,
        Err(done) => return done,
    };
    let budget = prep.budget;
    let mut search = ErtSearch::new(query, prep.mapped, prep.checker, params);

    let mut stats = PlanStats::default();
    let leaf = loop {
        if let Some(reason) = budget.exhausted(search.validity_checks(), search.iterations()) {
            stats.stopped_by = Some(reason);
            break None;
        }
        if let Some(leaf) = search.step().expect("segments are generated from their tree node") {
            break Some(leaf);
        }
    };

    stats.iterations = search.iterations();
    stats.validity_checks = search.validity_checks();
    stats.tree_sizes = vec![search.tree.len()];
    stats.elapsed_seconds = budget.elapsed(stats.validity_checks, stats.iterations);

    let mut trace = SearchTrace::default();
    let path = leaf.map(|leaf| {
        let traced = trace_path(Some((&search.tree, leaf)), None, None).expect("tree branches are connected");
        trace.source_states = Some(traced.source_states);
        traced.path
    });
    let status = if path.is_some() {
        stats.solved_by = Some(SolvedBy::TreeSearch);
        PlanStatus::Solved
    } else {
        PlanStatus::Timeout
    };
    trace.mapped_prior = Some(search.mapped);
    trace.trees = vec![search.tree];
    PlanResult {
        status,
        path,
        stats,
        search: trace,
    }
}
