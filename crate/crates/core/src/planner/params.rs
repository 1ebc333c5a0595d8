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

use crate::error::{Error, Result};

/// Malleability bound, either one value for every dimension or one per
/// dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Epsilon {
    Uniform(f64),
    PerDimension(Vec<f64>),
}

impl Epsilon {
    pub fn get(&self, i: usize) -> f64 {
        match self {
            Epsilon::Uniform(e) => *e,
            Epsilon::PerDimension(v) => v[i],
        }
    }

    pub fn resolve(&self, dim: usize) -> Result<Vec<f64>> {
        match self {
            Epsilon::Uniform(e) => Ok(vec![*e; dim]),
            Epsilon::PerDimension(v) if v.len() == dim => Ok(v.clone()),
            Epsilon::PerDimension(v) => Err(Error::dim(dim, v.len())),
        }
    }
}

/// How elapsed time is measured against the timeout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockMode {
    /// Real wall-clock time around the planning call.
    #[default]
    Wall,
    /// Modelled time charged per validity check and per iteration. Makes
    /// timeouts, and therefore whole benchmark records, reproducible.
    Virtual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerParams {
    /// Probability of a goal-connect attempt per ERT iteration.
    pub p: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub epsilon: Epsilon,
    /// Check resolution in configuration units; `None` uses the world default.
    pub delta: Option<f64>,
    /// Seconds.
    pub timeout: f64,
    pub max_iterations: u64,
    pub seed: u64,
    /// RRTConnect step; `None` means 5% of the configuration-space diameter.
    pub rrt_step: Option<f64>,
    pub clock: ClockMode,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            p: 0.05,
            omega_min: 0.05,
            omega_max: 0.1,
            epsilon: Epsilon::Uniform(5.0),
            delta: None,
            timeout: 2.0,
            max_iterations: 1_000_000,
            seed: 0,
            rrt_step: None,
            clock: ClockMode::Wall,
        }
    }
}

impl PlannerParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::invalid(format!("p = {} outside [0, 1]", self.p)));
        }
        if !(self.omega_min > 0.0 && self.omega_min <= self.omega_max && self.omega_max <= 1.0) {
            return Err(Error::invalid(format!(
                "need 0 < omega_min <= omega_max <= 1, got {} and {}",
                self.omega_min, self.omega_max
            )));
        }
        let eps_ok = match &self.epsilon {
            Epsilon::Uniform(e) => e.is_finite() && *e >= 0.0,
            Epsilon::PerDimension(v) => v.iter().all(|e| e.is_finite() && *e >= 0.0),
        };
        if !eps_ok {
            return Err(Error::invalid("epsilon must be finite and non-negative"));
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::invalid(format!("delta = {d} must be positive")));
            }
        }
        if let Some(s) = self.rrt_step {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::invalid(format!("rrt_step = {s} must be positive")));
            }
        }
        if self.timeout.is_nan() || self.timeout < 0.0 {
            return Err(Error::invalid(format!("timeout = {} must be non-negative", self.timeout)));
        }
        Ok(())
    }
}
