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
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::path::{Direction, MicroSegment, PathExperience, PhasedState};
use crate::world::{QueryInstance, SegmentChecker};

use super::result::{PlanResult, PlanStats, PlanStatus, SearchTrace, SolvedBy};
use super::segment::generate_segment;
use super::trace::{trace_path, TracedPath, JUNCTION_TOLERANCE};
use super::tree::{ExperienceTree, Extension};
use super::{certify, prepare, PlannerParams};

const FORWARD: usize = 0;
const BACKWARD: usize = 1;

/// How the two trees met.
#[derive(Clone, Debug, PartialEq)]
pub enum Meeting {
    /// A tree reached the other tree's root on its own.
    Extreme { tree: usize, leaf: usize },
    /// A connect segment bridged the trees. `bridge` starts at `near` in
    /// the tree `1 - tree` and ends at `leaf` in `tree`.
    Bridge {
        tree: usize,
        leaf: usize,
        near: usize,
        bridge: MicroSegment,
    },
}

/// Bi-directional search state, advanced one iteration at a time.
pub struct ErtConnectSearch<'a> {
    mapped: PathExperience,
    trees: [ExperienceTree; 2],
    active: usize,
    params: &'a PlannerParams,
    rng: ChaCha8Rng,
    checker: SegmentChecker<'a>,
    iterations: u64,
}

impl<'a> ErtConnectSearch<'a> {
    pub fn new(query: &QueryInstance, mapped: PathExperience, checker: SegmentChecker<'a>, params: &'a PlannerParams) -> Self {
        let start = PhasedState {
            q: query.q_start.clone(),
            alpha: 0.0,
        };
        let goal = PhasedState {
            q: query.q_goal.clone(),
            alpha: 1.0,
        };
        Self {
            mapped,
            trees: [
                ExperienceTree::new(start, Direction::Forward),
                ExperienceTree::new(goal, Direction::Backward),
            ],
            active: FORWARD,
            params,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            checker,
            iterations: 0,
        }
    }

    /// The start-rooted (forward) and goal-rooted (backward) trees.
    pub fn trees(&self) -> &[ExperienceTree; 2] {
        &self.trees
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

    /// One iteration on the active tree: explore, then try to bridge to the
    /// nearest node of the other tree. A meeting is only reported once the
    /// joined path passes the finer certification check. Trees swap roles
    /// afterwards unless the explore step had no phase span left.
    pub fn step(&mut self) -> Result<Option<Meeting>> {
        self.iterations += 1;
        let a = self.active;
        let b = 1 - a;

        let from = self.trees[a].select_node(&mut self.rng);
        let s_init = self.trees[a].node(from).state.clone();
        let direction = self.trees[a].direction();
        let psi = match generate_segment(&s_init, None, &self.mapped, direction, self.params, &mut self.rng) {
            Ok((psi, _)) => psi,
            // node sits at its tree's phase extreme; reselect next round
            Err(Error::DegenerateSpan(_)) => return Ok(None),
            Err(e) => return Err(e),
        };

        if let Extension::Advanced(leaf) = self.trees[a].extend(psi, from, &mut self.checker)? {
            let s_new = self.trees[a].node(leaf).state.clone();
            let other_root = &self.trees[b].root().state;
            if s_new.alpha == other_root.alpha && s_new.q.distance(&other_root.q) <= JUNCTION_TOLERANCE {
                let meeting = Meeting::Extreme { tree: a, leaf };
                if self.certified(&meeting)? {
                    return Ok(Some(meeting));
                }
                self.active = b;
                return Ok(None);
            }

            let near = self.trees[b].nearest(&s_new.q);
            let s_near = self.trees[b].node(near).state.clone();
            let connected = generate_segment(
                &s_near,
                Some(&s_new),
                &self.mapped,
                self.trees[b].direction(),
                self.params,
                &mut self.rng,
            );
            match connected {
                Ok((bridge, _)) => {
                    if self.checker.states(bridge.states()) {
                        let meeting = Meeting::Bridge {
                            tree: a,
                            leaf,
                            near,
                            bridge,
                        };
                        if self.certified(&meeting)? {
                            return Ok(Some(meeting));
                        }
                    }
                }
                Err(Error::DegenerateSegment(_)) => {}
                Err(e) => return Err(e),
            }
        }
        self.active = b;
        Ok(None)
    }

    fn certified(&mut self, meeting: &Meeting) -> Result<bool> {
        let traced = self.trace(meeting)?;
        Ok(certify(&mut self.checker, &traced.source_states))
    }

    /// Joins the trees into a start-to-goal path.
    pub fn trace(&self, meeting: &Meeting) -> Result<TracedPath> {
        let (fwd, bwd) = (&self.trees[FORWARD], &self.trees[BACKWARD]);
        match meeting {
            Meeting::Extreme { tree, leaf } if *tree == FORWARD => {
                trace_path(Some((fwd, *leaf)), None, Some((bwd, 0)))
            }
            Meeting::Extreme { leaf, .. } => trace_path(Some((fwd, 0)), None, Some((bwd, *leaf))),
            Meeting::Bridge {
                tree,
                leaf,
                near,
                bridge,
            } => {
                let (f, k) = if *tree == FORWARD { (*leaf, *near) } else { (*near, *leaf) };
                trace_path(Some((fwd, f)), Some(bridge), Some((bwd, k)))
            }
        }
    }
}

/// Plans with a start tree and a goal tree that consume the prior in
/// opposite directions and try to bridge after every successful explore.
pub fn ertconnect_plan(query: &QueryInstance, xi_d: &PathExperience, params: &PlannerParams) -> PlanResult {
    let prep = match prepare(query, xi_d, params) {
        Ok(p) => p,
        Err(done) => return done,
    };
    let budget = prep.budget;
    let mut search = ErtConnectSearch::new(query, prep.mapped, prep.checker, params);

    let mut stats = PlanStats::default();
    let meeting = loop {
        if let Some(reason) = budget.exhausted(search.validity_checks(), search.iterations()) {
            stats.stopped_by = Some(reason);
            break None;
        }
        if let Some(m) = search.step().expect("segments are generated from their tree node") {
            break Some(m);
        }
    };

    let mut trace = SearchTrace::default();
    let path = meeting.map(|m| {
        let traced = search.trace(&m).expect("bridges join their end states exactly");
        trace.source_states = Some(traced.source_states);
        traced.path
    });

    stats.iterations = search.iterations();
    stats.validity_checks = search.validity_checks();
    stats.tree_sizes = search.trees.iter().map(|t| t.len()).collect();
    stats.elapsed_seconds = budget.elapsed(stats.validity_checks, stats.iterations);
    let status = if path.is_some() {
        stats.solved_by = Some(SolvedBy::TreeSearch);
        PlanStatus::Solved
    } else {
        PlanStatus::Timeout
    };
    let [fwd, bwd] = search.trees;
    trace.mapped_prior = Some(search.mapped);
    trace.trees = vec![fwd, bwd];
    PlanResult {
        status,
        path,
        stats,
        search: trace,
    }
}
