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
use std::time::Instant;

use super::params::ClockMode;
use super::result::StopReason;

/// Modelled cost of one state validity check under [`ClockMode::Virtual`].
pub const VIRTUAL_SECONDS_PER_CHECK: f64 = 2.5e-7;
/// Modelled per-iteration overhead under [`ClockMode::Virtual`].
pub const VIRTUAL_SECONDS_PER_ITERATION: f64 = 1e-6;

#[derive(Debug)]
pub(crate) struct Budget {
    mode: ClockMode,
    start: Instant,
    timeout: f64,
    max_iterations: u64,
}

impl Budget {
    pub fn start(mode: ClockMode, timeout: f64, max_iterations: u64) -> Self {
        Self {
            mode,
            start: Instant::now(),
            timeout,
            max_iterations,
        }
    }

    pub fn elapsed(&self, checks: u64, iterations: u64) -> f64 {
        match self.mode {
            ClockMode::Wall => self.start.elapsed().as_secs_f64(),
            ClockMode::Virtual => {
                checks as f64 * VIRTUAL_SECONDS_PER_CHECK
                    + iterations as f64 * VIRTUAL_SECONDS_PER_ITERATION
            }
        }
    }

    pub fn exhausted(&self, checks: u64, iterations: u64) -> Option<StopReason> {
        if iterations >= self.max_iterations {
            return Some(StopReason::MaxIterations);
        }
        if self.elapsed(checks, iterations) >= self.timeout {
            return Some(StopReason::Timeout);
        }
        None
    }
}
