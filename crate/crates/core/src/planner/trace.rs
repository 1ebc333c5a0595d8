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
use crate::error::{Error, Result};
use crate::path::{phase_parametrize, Configuration, MicroSegment, PathExperience, PhasedState};

use super::tree::ExperienceTree;

/// Junction states closer than this are treated as the same state.
pub const JUNCTION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TracedPath {
    pub path: PathExperience,
    /// The concatenated states with their source phases.
    pub source_states: Vec<PhasedState>,
}

/// Joins a forward branch (root to leaf), an optional bridge, and a
/// backward branch (leaf to root) into one path from start to goal.
///
/// The bridge may be given in either orientation. Junction states are kept
/// once, preferring the later copy so the backward root stays exact.
pub fn trace_path(
    forward: Option<(&ExperienceTree, usize)>,
    bridge: Option<&MicroSegment>,
    backward: Option<(&ExperienceTree, usize)>,
) -> Result<TracedPath> {
    let mut states: Vec<PhasedState> = Vec::new();

    if let Some((tree, leaf)) = forward {
        states = tree.branch_states(leaf);
    }
    if let Some(seg) = bridge {
        let seg_states = seg.states();
        if states.is_empty() {
            states.extend(seg_states.iter().cloned());
        } else {
            let tail = &states[states.len() - 1].q;
            if close(tail, &seg.first().q) {
                append(&mut states, seg_states.iter().cloned());
            } else if close(tail, &seg.last().q) {
                append(&mut states, seg_states.iter().rev().cloned());
            } else {
                return Err(Error::AnchorMismatch);
            }
        }
    }
    if let Some((tree, leaf)) = backward {
        let mut back = tree.branch_states(leaf);
        back.reverse();
        if states.is_empty() {
            states = back;
        } else if close(&states[states.len() - 1].q, &back[0].q) {
            append(&mut states, back);
        } else {
            return Err(Error::AnchorMismatch);
        }
    }

    states.dedup_by(|b, a| a.q == b.q);
    let configs: Vec<Configuration> = states.iter().map(|s| s.q.clone()).collect();
    let path = phase_parametrize(&configs)?;
    Ok(TracedPath {
        path,
        source_states: states,
    })
}

fn close(a: &Configuration, b: &Configuration) -> bool {
    a.distance(b) <= JUNCTION_TOLERANCE
}

// Replaces the junction state with the head of `more`, then appends the rest.
fn append(states: &mut Vec<PhasedState>, more: impl IntoIterator<Item = PhasedState>) {
    states.pop();
    states.extend(more);
}
