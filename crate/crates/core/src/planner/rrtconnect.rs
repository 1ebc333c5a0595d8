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
//! Bi-directional RRT with the greedy connect heuristic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::path::{phase_parametrize, Configuration, PathExperience};
use crate::world::{QueryInstance, SegmentChecker};

use super::clock::Budget;
use super::tree::nearest_flat;
use super::result::{PlanResult, PlanStats, PlanStatus, RrtTree, SearchTrace, SolvedBy};
use super::{certify, resolution, PlannerParams};

enum Step {
    Reached(usize),
    Advanced(usize),
    Trapped,
}

/// An RRT tree being grown, with its configurations also kept flat for
/// nearest-neighbour scans.
struct Growing {
    tree: RrtTree,
    coords: Vec<f64>,
}

impl Growing {
    fn rooted(q: Configuration) -> Self {
        Self {
            coords: q.coords().to_vec(),
            tree: RrtTree {
                nodes: vec![q],
                parents: vec![None],
            },
        }
    }

    fn extend(&mut self, target: &Configuration, step: f64, checker: &mut SegmentChecker) -> Step {
        let near = nearest_flat(&self.coords, target);
        let from = &self.tree.nodes[near];
        let d = from.distance(target);
        let (q_new, reached) = if d <= step {
            (target.clone(), true)
        } else {
            (from.lerp(target, step / d), false)
        };
        if !checker.edge(from, &q_new) {
            return Step::Trapped;
        }
        self.coords.extend_from_slice(&q_new);
        self.tree.nodes.push(q_new);
        self.tree.parents.push(Some(near));
        let i = self.tree.nodes.len() - 1;
        if reached {
            Step::Reached(i)
        } else {
            Step::Advanced(i)
        }
    }
}

impl RrtTree {
    fn branch(&self, leaf: usize) -> Vec<Configuration> {
        let mut out = vec![self.nodes[leaf].clone()];
        let mut cur = leaf;
        while let Some(p) = self.parents[cur] {
            out.push(self.nodes[p].clone());
            cur = p;
        }
        out.reverse();
        out
    }
}

/// Start-to-goal path through the two leaves that just met; `a` is the
/// tree that grew `i`.
fn join(trees: &[Growing; 2], a: usize, i: usize, j: usize) -> PathExperience {
    let (start_leaf, goal_leaf) = if a == 0 { (i, j) } else { (j, i) };
    let mut configs = trees[0].tree.branch(start_leaf);
    let mut back = trees[1].tree.branch(goal_leaf);
    back.reverse();
    // both leaves hold the same configuration
    configs.pop();
    configs.extend(back);
    phase_parametrize(&configs).expect("start and goal differ")
}

/// Plans from scratch with uniform sampling inside the world bounds.
pub fn rrtconnect_plan(query: &QueryInstance, params: &PlannerParams) -> PlanResult {
    let budget = Budget::start(params.clock, params.timeout, params.max_iterations);
    let world = &query.world;
    let n = world.dim();
    if params.validate().is_err()
        || query.q_start.dim() != n
        || query.q_goal.dim() != n
        || query.q_start == query.q_goal
    {
        return PlanResult::invalid(PlanStats::default());
    }
    let mut checker = SegmentChecker::new(world, resolution(query, params));
    if !(checker.state(&query.q_start) && checker.state(&query.q_goal)) {
        return PlanResult::invalid(PlanStats {
            validity_checks: checker.checks(),
            ..Default::default()
        });
    }
    let step = params.rrt_step.unwrap_or(0.05 * world.diameter());
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trees = [Growing::rooted(query.q_start.clone()), Growing::rooted(query.q_goal.clone())];
    let mut active = 0;
    let mut iterations = 0u64;
    let mut stats = PlanStats::default();

    let path = 'search: loop {
        if let Some(reason) = budget.exhausted(checker.checks(), iterations) {
            stats.stopped_by = Some(reason);
            break None;
        }
        iterations += 1;
        let sample = Configuration::from_vec(
            world
                .bounds()
                .iter()
                .map(|b| b[0] + (b[1] - b[0]) * rng.gen::<f64>())
                .collect(),
        );
        let other = 1 - active;
        let new = match trees[active].extend(&sample, step, &mut checker) {
            Step::Trapped => None,
            Step::Advanced(i) | Step::Reached(i) => Some(i),
        };
        if let Some(new) = new {
            let target = trees[active].tree.nodes[new].clone();
            loop {
                match trees[other].extend(&target, step, &mut checker) {
                    Step::Reached(j) => {
                        let path = join(&trees, active, new, j);
                        if certify(&mut checker, path.states()) {
                            break 'search Some(path);
                        }
                        break;
                    }
                    Step::Advanced(_) => {
                        if let Some(reason) = budget.exhausted(checker.checks(), iterations) {
                            stats.stopped_by = Some(reason);
                            break 'search None;
                        }
                    }
                    Step::Trapped => break,
                }
            }
        }
        active = other;
    };

    stats.iterations = iterations;
    stats.validity_checks = checker.checks();
    stats.tree_sizes = trees.iter().map(|t| t.tree.nodes.len()).collect();
    stats.elapsed_seconds = budget.elapsed(stats.validity_checks, iterations);
    let status = if path.is_some() {
        stats.solved_by = Some(SolvedBy::TreeSearch);
        PlanStatus::Solved
    } else {
        PlanStatus::Timeout
    };
    let [t0, t1] = trees;
    PlanResult {
        status,
        path,
        stats,
        search: SearchTrace {
            rrt_trees: vec![t0.tree, t1.tree],
            ..Default::default()
        },
    }
}
