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
//! Experience libraries, prior selection and prior mapping.

use crate::error::{Error, Result};
use crate::path::{Configuration, PathExperience, PhasedState};
use crate::planner::connect_segment;

/// Ordered collection of prior paths of one dimension. Order is the
/// tie-break priority for selection.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperienceLibrary {
    experiences: Vec<PathExperience>,
}

impl ExperienceLibrary {
    pub fn new(experiences: Vec<PathExperience>) -> Result<Self> {
        let mut lib = Self::default();
        for e in experiences {
            lib.push(e)?;
        }
        Ok(lib)
    }

    pub fn push(&mut self, path: PathExperience) -> Result<()> {
        if let Some(first) = self.experiences.first() {
            if first.dim() != path.dim() {
                return Err(Error::dim(first.dim(), path.dim()));
            }
        }
        self.experiences.push(path);
        Ok(())
    }

    pub fn experiences(&self) -> &[PathExperience] {
        &self.experiences
    }

    pub fn len(&self) -> usize {
        self.experiences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.experiences.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&PathExperience> {
        self.experiences.get(i)
    }

    /// The first `k` experiences, clamped to the library size.
    pub fn prefix(&self, k: usize) -> &[PathExperience] {
        &self.experiences[..k.min(self.experiences.len())]
    }

    pub fn select(&self, q_start: &Configuration, q_goal: &Configuration) -> Result<(usize, &PathExperience)> {
        select_experience(&self.experiences, q_start, q_goal)
    }
}

/// Sum of the start-to-start and goal-to-goal Euclidean distances.
pub fn selection_score(xi: &PathExperience, q_start: &Configuration, q_goal: &Configuration) -> f64 {
    xi.start().distance(q_start) + xi.goal().distance(q_goal)
}

/// Picks the experience whose endpoints are closest to the query's, the
/// lowest index winning ties.
pub fn select_experience<'l>(
    library: &'l [PathExperience],
    q_start: &Configuration,
    q_goal: &Configuration,
) -> Result<(usize, &'l PathExperience)> {
    let first = library.first().ok_or(Error::EmptyLibrary)?;
    let n = first.dim();
    q_start.check_dim(n)?;
    q_goal.check_dim(n)?;
    let mut best = (0, selection_score(first, q_start, q_goal));
    for (i, xi) in library.iter().enumerate().skip(1) {
        xi.start().check_dim(n)?;
        let score = selection_score(xi, q_start, q_goal);
        if score < best.1 {
            best = (i, score);
        }
    }
    Ok((best.0, &library[best.0]))
}

/// Re-anchors a prior so it starts at `q_start` and ends at `q_goal`,
/// shearing linearly in phase between the two. Phases are unchanged.
pub fn map_experience(xi_d: &PathExperience, q_start: &Configuration, q_goal: &Configuration) -> Result<PathExperience> {
    let start = PhasedState {
        q: q_start.clone(),
        alpha: 0.0,
    };
    let goal = PhasedState {
        q: q_goal.clone(),
        alpha: 1.0,
    };
    let (psi, _) = connect_segment(&start, &goal, xi_d)?;
    PathExperience::new(psi.states().to_vec())
}
