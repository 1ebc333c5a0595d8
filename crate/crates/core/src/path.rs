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
//! Configuration-phase primitives.
//!
//! Every state carries a phase `alpha` in `[0, 1]` alongside its
//! configuration. Paths are piecewise linear in both the configuration and
//! the phase, and phases are assigned by normalized arc length.

use std::ops::Deref;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Coordinates stored inline up to this dimension, avoiding a heap
/// allocation per state on the planners' hot paths.
const INLINE_DIM: usize = 4;

/// A point in an n-dimensional configuration space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Configuration(SmallVec<[f64; INLINE_DIM]>);

impl Configuration {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("configuration has no coordinates"));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("non-finite coordinate {c}")));
        }
        Ok(Self(SmallVec::from_vec(coords)))
    }

    /// Builds a configuration from values already known to be finite.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Self(SmallVec::from_vec(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0.into_vec()
    }

    pub fn distance(&self, other: &Configuration) -> f64 {
        distance(&self.0, &other.0)
    }

    /// `self + t (other - self)`, computed per coordinate.
    pub fn lerp(&self, other: &Configuration, t: f64) -> Configuration {
        Configuration(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::dim(expected, self.dim()))
        }
    }
}

impl Deref for Configuration {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Configuration {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Configuration::new(v)
    }
}

impl From<Configuration> for Vec<f64> {
    fn from(c: Configuration) -> Self {
        c.into_vec()
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A configuration tagged with its task phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasedState {
    pub q: Configuration,
    pub alpha: f64,
}

impl PhasedState {
    pub fn new(q: Configuration, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::PhaseOutOfRange(alpha));
        }
        Ok(Self { q, alpha })
    }
}

/// Which way along the phase axis a tree or segment consumes the prior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    /// Phase of the root a tree of this direction grows from.
    pub fn origin_phase(self) -> f64 {
        match self {
            Direction::Forward => 0.0,
            Direction::Backward => 1.0,
        }
    }
}

/// A continuous path whose phases run strictly from 0 to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PathExperience {
    states: Vec<PhasedState>,
}

impl PathExperience {
    pub fn new(states: Vec<PhasedState>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::DegeneratePath);
        }
        let n = states[0].q.dim();
        for s in &states {
            s.q.check_dim(n)?;
        }
        if states[0].alpha != 0.0 || states[states.len() - 1].alpha != 1.0 {
            return Err(Error::invalid("path phases must start at 0 and end at 1"));
        }
        if states.windows(2).any(|w| w[1].alpha <= w[0].alpha) {
            return Err(Error::invalid("path phases must be strictly increasing"));
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[PhasedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].q.dim()
    }

    pub fn start(&self) -> &Configuration {
        &self.states[0].q
    }

    pub fn goal(&self) -> &Configuration {
        &self.states[self.states.len() - 1].q
    }

    pub fn configurations(&self) -> impl Iterator<Item = &Configuration> {
        self.states.iter().map(|s| &s.q)
    }

    pub fn arc_length(&self) -> f64 {
        self.states
            .windows(2)
            .map(|w| w[0].q.distance(&w[1].q))
            .sum()
    }

    /// Configuration at phase `alpha`, interpolated linearly between the
    /// bracketing waypoints. Stored waypoints are returned exactly.
    pub fn state_at(&self, alpha: f64) -> Result<Configuration> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::PhaseOutOfRange(alpha));
        }
        // index of the first state with phase >= alpha
        let i = self.states.partition_point(|s| s.alpha < alpha);
        let hi = &self.states[i];
        if hi.alpha == alpha {
            return Ok(hi.q.clone());
        }
        let lo = &self.states[i - 1];
        let t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
        Ok(lo.q.lerp(&hi.q, t))
    }

    /// Slice of the path between two phases, ordered from `alpha_a` to
    /// `alpha_b` and anchored at `alpha_a`.
    pub fn extract_segment(&self, alpha_a: f64, alpha_b: f64) -> Result<MicroSegment> {
        if alpha_a == alpha_b {
            return Err(Error::DegenerateSegment(alpha_a));
        }
        let first = self.state_at(alpha_a)?;
        let last = self.state_at(alpha_b)?;
        let (lo, hi) = (alpha_a.min(alpha_b), alpha_a.max(alpha_b));
        // interior waypoints: phases strictly inside (lo, hi)
        let i0 = self.states.partition_point(|s| s.alpha <= lo);
        let i1 = self.states.partition_point(|s| s.alpha < hi).max(i0);
        let interior = &self.states[i0..i1];

        let mut states = Vec::with_capacity(interior.len() + 2);
        states.push(PhasedState { q: first, alpha: alpha_a });
        if alpha_b > alpha_a {
            states.extend_from_slice(interior);
        } else {
            states.extend(interior.iter().rev().cloned());
        }
        states.push(PhasedState { q: last, alpha: alpha_b });

        Ok(MicroSegment::from_parts(states))
    }

    /// The whole path as a forward segment anchored at phase 0.
    pub fn as_segment(&self) -> MicroSegment {
        MicroSegment::from_parts(self.states.clone())
    }

    pub fn into_states(self) -> Vec<PhasedState> {
        self.states
    }
}

/// Assigns phases to raw waypoints by normalized cumulative arc length.
///
/// Consecutive duplicate waypoints are dropped first.
pub fn phase_parametrize(waypoints: &[Configuration]) -> Result<PathExperience> {
    let Some(first) = waypoints.first() else {
        return Err(Error::DegeneratePath);
    };
    let n = first.dim();
    let mut kept: Vec<&Configuration> = Vec::with_capacity(waypoints.len());
    for w in waypoints {
        w.check_dim(n)?;
        if kept.last().is_some_and(|last| last.coords() == w.coords()) {
            continue;
        }
        kept.push(w);
    }
    if kept.len() < 2 {
        return Err(Error::DegeneratePath);
    }

    let mut cumulative = Vec::with_capacity(kept.len());
    let mut total = 0.0;
    cumulative.push(0.0);
    for w in kept.windows(2) {
        total += w[0].distance(w[1]);
        cumulative.push(total);
    }
    if total.is_nan() || total <= 0.0 {
        return Err(Error::DegeneratePath);
    }

    let last = kept.len() - 1;
    let mut states = Vec::with_capacity(kept.len());
    states.push(PhasedState {
        q: kept[0].clone(),
        alpha: 0.0,
    });
    for (w, s) in kept[1..last].iter().zip(&cumulative[1..last]) {
        let alpha = s / total;
        // edges far below the total length can round onto a neighbouring phase
        if alpha <= states[states.len() - 1].alpha || alpha >= 1.0 {
            continue;
        }
        states.push(PhasedState {
            q: (*w).clone(),
            alpha,
        });
    }
    states.push(PhasedState {
        q: kept[last].clone(),
        alpha: 1.0,
    });
    PathExperience::new(states)
}

/// A contiguous phase slice of a path, stored from its anchor end.
#[derive(Clone, Debug, PartialEq)]
pub struct MicroSegment {
    states: Vec<PhasedState>,
    anchor_alpha: f64,
    span: f64,
    direction: Direction,
}

impl MicroSegment {
    /// Builds a segment from states ordered from the anchor outwards.
    pub fn new(states: Vec<PhasedState>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::DegeneratePath);
        }
        let n = states[0].q.dim();
        for s in &states {
            s.q.check_dim(n)?;
        }
        let forward = states[states.len() - 1].alpha > states[0].alpha;
        let monotone = states.windows(2).all(|w| {
            if forward {
                w[1].alpha >= w[0].alpha
            } else {
                w[1].alpha <= w[0].alpha
            }
        });
        if states[0].alpha == states[states.len() - 1].alpha {
            return Err(Error::DegenerateSegment(states[0].alpha));
        }
        if !monotone {
            return Err(Error::invalid("segment phases are not monotone"));
        }
        Ok(Self::from_parts(states))
    }

    pub(crate) fn from_parts(states: Vec<PhasedState>) -> Self {
        let a = states[0].alpha;
        let b = states[states.len() - 1].alpha;
        Self {
            states,
            anchor_alpha: a,
            span: (b - a).abs(),
            direction: if b > a {
                Direction::Forward
            } else {
                Direction::Backward
            },
        }
    }

    pub fn states(&self) -> &[PhasedState] {
        &self.states
    }

    pub(crate) fn states_mut(&mut self) -> &mut [PhasedState] {
        &mut self.states
    }

    pub fn anchor_alpha(&self) -> f64 {
        self.anchor_alpha
    }

    pub fn end_alpha(&self) -> f64 {
        self.last().alpha
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dim(&self) -> usize {
        self.states[0].q.dim()
    }

    pub fn first(&self) -> &PhasedState {
        &self.states[0]
    }

    pub fn last(&self) -> &PhasedState {
        &self.states[self.states.len() - 1]
    }

    /// Local parameter of `alpha`, 0 at the anchor and 1 at the far end.
    pub fn rho(&self, alpha: f64) -> f64 {
        (alpha - self.anchor_alpha).abs() / self.span
    }
}
