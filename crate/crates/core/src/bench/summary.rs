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
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::{PlanStatus, PlannerKind};

use super::run::BenchmarkRecord;
use super::scenario::scenario_set;

/// Aggregate over one (planner, set, library size) group. Time statistics
/// cover solved runs only and are `None` when nothing was solved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub planner: PlannerKind,
    /// Scenario set parsed from the label, `None` for custom labels.
    pub set: Option<u8>,
    pub lib_size: usize,
    pub runs: usize,
    pub solved: usize,
    pub timeouts: usize,
    pub invalid: usize,
    pub success_rate: f64,
    pub median_s: Option<f64>,
    pub mean_s: Option<f64>,
    pub p95_s: Option<f64>,
    pub mean_selection_s: f64,
}

/// Median with the mean of the two middle values for even counts.
fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

/// Nearest-rank percentile.
fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil().max(1.0) as usize;
    Some(sorted[rank.min(sorted.len()) - 1])
}

pub fn summarize(records: &[BenchmarkRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut groups: BTreeMap<(PlannerKind, Option<u8>, usize), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.planner, scenario_set(&r.scenario), r.lib_size))
            .or_default()
            .push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((planner, set, lib_size), rs)| {
            let count = |s: PlanStatus| rs.iter().filter(|r| r.status == s).count();
            let mut times: Vec<f64> = rs
                .iter()
                .filter(|r| r.status == PlanStatus::Solved)
                .map(|r| r.elapsed_s)
                .collect();
            times.sort_by(f64::total_cmp);
            let solved = times.len();
            SummaryRow {
                planner,
                set,
                lib_size,
                runs: rs.len(),
                solved,
                timeouts: count(PlanStatus::Timeout),
                invalid: count(PlanStatus::InvalidQuery),
                success_rate: solved as f64 / rs.len() as f64,
                median_s: median(&times),
                mean_s: (solved > 0).then(|| times.iter().sum::<f64>() / solved as f64),
                p95_s: percentile(&times, 95.0),
                mean_selection_s: rs.iter().map(|r| r.selection_seconds).sum::<f64>() / rs.len() as f64,
            }
        })
        .collect())
}
