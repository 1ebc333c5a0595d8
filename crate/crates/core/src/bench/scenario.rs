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
//! Shelf-like scenario suites of increasing dissimilarity.
//!
//! The workspace is a vertical cross-section of a shelf: horizontal slabs
//! with a back wall, opening towards the robot on the left. Targets sit deep
//! inside a tier and clutter discs are dropped in front of them.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::Configuration;
use crate::planner::{rrtconnect_plan, ClockMode, PlannerParams};
use crate::world::{Obstacle, QueryInstance, SegmentChecker, World};

use super::mix_seed;

const POINT_BOUNDS: [[f64; 2]; 2] = [[0.0, 5.0], [0.0, 5.0]];
const MAX_ATTEMPTS: usize = 200;
const GRID_STEP: f64 = 0.02;

/// Robot used in a scenario suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RobotTemplate {
    Point2d,
    PlanarArm {
        link_lengths: Vec<f64>,
        base: [f64; 2],
        /// Resting configuration the start is jittered around.
        rest: Vec<f64>,
    },
}

impl RobotTemplate {
    pub fn planar_arm() -> Self {
        RobotTemplate::PlanarArm {
            link_lengths: vec![1.2, 1.0, 0.6],
            base: [1.0, 3.2],
            rest: vec![-FRAC_PI_2, 0.3, 0.3],
        }
    }
}

/// Shelf geometry and randomization ranges, in workspace units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShelfTemplate {
    /// When false the shelf is only used to place targets; the world is empty.
    pub with_shelf: bool,
    pub tiers: usize,
    pub tier_height: f64,
    pub depth: f64,
    pub slab_thickness: f64,
    /// x of the shelf opening.
    pub front_x: f64,
    /// y of the lowest slab's centre line.
    pub bottom_y: f64,
    /// Shelf pose jitter, uniform in `±pose_jitter` along x and y.
    pub pose_jitter: f64,
    /// Start jitter, uniform in `±start_jitter` per coordinate.
    pub start_jitter: f64,
    /// Point-robot start before jitter.
    pub start: [f64; 2],
    /// Tiers targets may be placed in; tier 0 is the lowest.
    pub target_tiers: Vec<usize>,
    /// Inclusive range of clutter disc counts.
    pub clutter: [usize; 2],
    /// Range of clutter disc radii.
    pub clutter_radius: [f64; 2],
    /// Largest vertical offset of a clutter disc from the target's height;
    /// small values put the discs on the direct approach.
    pub clutter_offset: f64,
    /// How far in front of the back wall the target sits.
    pub target_inset: [f64; 2],
}

impl ShelfTemplate {
    pub fn middle_tier(&self) -> usize {
        self.tiers / 2
    }

    fn tier_center(&self, tier: usize, dy: f64) -> f64 {
        self.bottom_y + dy + (tier as f64 + 0.5) * self.tier_height
    }

    fn validate(&self) -> Result<()> {
        let finite = [
            self.tier_height,
            self.depth,
            self.slab_thickness,
            self.front_x,
            self.bottom_y,
            self.pose_jitter,
            self.start_jitter,
            self.start[0],
            self.start[1],
            self.clutter_radius[0],
            self.clutter_radius[1],
            self.clutter_offset,
            self.target_inset[0],
            self.target_inset[1],
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("shelf template has non-finite values"));
        }
        if self.tiers == 0 || self.tier_height <= 0.0 || self.depth <= 0.0 {
            return Err(Error::invalid("shelf needs at least one tier of positive size"));
        }
        if self.pose_jitter < 0.0 || self.start_jitter < 0.0 {
            return Err(Error::invalid("jitter ranges must be non-negative"));
        }
        if self.clutter[0] > self.clutter[1]
            || self.clutter_radius[0] <= 0.0
            || self.clutter_radius[0] > self.clutter_radius[1]
            || self.target_inset[0] > self.target_inset[1]
        {
            return Err(Error::invalid("empty randomization range"));
        }
        if self.target_tiers.is_empty() || self.target_tiers.iter().any(|t| *t >= self.tiers) {
            return Err(Error::invalid("target tiers must name existing tiers"));
        }
        Ok(())
    }
}

/// A scenario suite: one of the four dissimilarity sets, a size and a seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub set_id: u8,
    pub count: usize,
    pub seed: u64,
    pub shelf: ShelfTemplate,
    pub robot: RobotTemplate,
}

impl ScenarioSpec {
    /// Default suite for `set_id` in 1..=4 with the point robot.
    pub fn new(set_id: u8, count: usize, seed: u64) -> Result<Self> {
        let base = ShelfTemplate {
            with_shelf: true,
            tiers: 4,
            tier_height: 0.55,
            depth: 1.8,
            slab_thickness: 0.1,
            front_x: 2.6,
            bottom_y: 1.4,
            pose_jitter: 0.2,
            start_jitter: 0.1,
            start: [0.6, 2.9],
            target_tiers: vec![2],
            clutter: [1, 3],
            clutter_radius: [0.08, 0.14],
            clutter_offset: 1.0,
            target_inset: [0.2, 0.45],
        };
        let shelf = match set_id {
            1 => ShelfTemplate {
                with_shelf: false,
                clutter: [0, 0],
                ..base
            },
            2 => base,
            3 => ShelfTemplate {
                target_tiers: vec![1, 2, 3],
                ..base
            },
            4 => ShelfTemplate {
                tiers: 5,
                tier_height: 0.6,
                depth: 1.1,
                bottom_y: 1.0,
                front_x: 2.9,
                pose_jitter: 0.35,
                start: [0.6, 2.8],
                target_tiers: vec![1, 2, 3],
                clutter: [1, 3],
                clutter_radius: [0.06, 0.1],
                target_inset: [0.15, 0.35],
                ..base
            },
            other => return Err(Error::invalid(format!("scenario set must be 1..=4, got {other}"))),
        };
        let spec = Self {
            set_id,
            count,
            seed,
            shelf,
            robot: RobotTemplate::Point2d,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same set with the planar arm. The shelf is moved and thickened so the
    /// slabs stay wider than the tip displacement per check step.
    pub fn with_planar_arm(mut self) -> Self {
        let s = &mut self.shelf;
        let scale = 1.6;
        s.tier_height *= scale;
        s.slab_thickness = 0.35;
        s.front_x = 2.3;
        s.bottom_y = 3.2 - (s.middle_tier() as f64 + 0.5) * s.tier_height;
        s.depth = s.depth.min(1.2);
        s.target_inset = [0.15, 0.3];
        self.robot = RobotTemplate::planar_arm();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.set_id) {
            return Err(Error::invalid(format!("scenario set must be 1..=4, got {}", self.set_id)));
        }
        if self.count == 0 {
            return Err(Error::invalid("scenario count must be positive"));
        }
        self.shelf.validate()?;
        if let RobotTemplate::PlanarArm {
            link_lengths,
            base,
            rest,
        } = &self.robot
        {
            if rest.len() != link_lengths.len() {
                return Err(Error::dim(link_lengths.len(), rest.len()));
            }
            World::planar_arm(link_lengths.clone(), *base, vec![])?;
        }
        Ok(())
    }

    /// Workspace distance the robot can move between two consecutive checks.
    fn workspace_resolution(&self) -> f64 {
        let world = self.empty_world().expect("validated template");
        let delta = world.default_delta();
        match &self.robot {
            RobotTemplate::Point2d => delta,
            RobotTemplate::PlanarArm { link_lengths, .. } => delta * link_lengths.iter().sum::<f64>(),
        }
    }

    fn empty_world(&self) -> Result<World> {
        self.world(vec![])
    }

    fn world(&self, obstacles: Vec<Obstacle>) -> Result<World> {
        match &self.robot {
            RobotTemplate::Point2d => World::point2d(POINT_BOUNDS, obstacles),
            RobotTemplate::PlanarArm {
                link_lengths, base, ..
            } => World::planar_arm(link_lengths.clone(), *base, obstacles),
        }
    }
}

/// Set number encoded in a generated scenario label (`set2-0007-t2`).
pub fn scenario_set(label: &str) -> Option<u8> {
    label.strip_prefix("set")?.split('-').next()?.parse().ok()
}

/// Target tier encoded in a generated scenario label.
pub fn scenario_tier(label: &str) -> Option<usize> {
    label.split('-').find_map(|p| p.strip_prefix('t')?.parse().ok())
}

/// Generates `spec.count` solvable query instances. Instance `i` depends only
/// on `(spec, i)`.
pub fn generate_scenarios(spec: &ScenarioSpec) -> Result<Vec<QueryInstance>> {
    spec.validate()?;
    let res = spec.workspace_resolution();
    let s = &spec.shelf;
    if s.with_shelf {
        if s.slab_thickness <= res {
            return Err(Error::TemplateInfeasible(format!(
                "slab thickness {} does not exceed the check resolution {res:.4}",
                s.slab_thickness
            )));
        }
        if s.tier_height - s.slab_thickness <= res {
            return Err(Error::TemplateInfeasible(format!(
                "tier gap {} does not exceed the check resolution {res:.4}",
                s.tier_height - s.slab_thickness
            )));
        }
    }
    (0..spec.count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[spec.seed, spec.set_id as u64, i as u64]));
            (0..MAX_ATTEMPTS)
                .find_map(|_| sample_instance(spec, i, &mut rng).transpose())
                .unwrap_or_else(|| {
                    Err(Error::TemplateInfeasible(format!(
                        "no solvable placement for instance {i} after {MAX_ATTEMPTS} attempts"
                    )))
                })
        })
        .collect()
}

fn sym<R: Rng>(rng: &mut R, half: f64) -> f64 {
    if half > 0.0 {
        rng.gen_range(-half..=half)
    } else {
        0.0
    }
}

fn range<R: Rng>(rng: &mut R, r: [f64; 2]) -> f64 {
    if r[1] > r[0] {
        rng.gen_range(r[0]..=r[1])
    } else {
        r[0]
    }
}

fn shelf_obstacles(s: &ShelfTemplate, dx: f64, dy: f64) -> Vec<Obstacle> {
    let t = s.slab_thickness;
    let front = s.front_x + dx;
    let half_w = (s.depth + t) / 2.0;
    let mut obs: Vec<Obstacle> = (0..=s.tiers)
        .map(|i| {
            let y = s.bottom_y + dy + i as f64 * s.tier_height;
            Obstacle::rect([front + half_w, y], [half_w, t / 2.0])
        })
        .collect();
    let half_h = s.tiers as f64 * s.tier_height / 2.0;
    obs.push(Obstacle::rect(
        [front + s.depth + t / 2.0, s.bottom_y + dy + half_h],
        [t / 2.0, half_h + t / 2.0],
    ));
    obs
}

/// One placement attempt; `Ok(None)` asks for a resample.
fn sample_instance(spec: &ScenarioSpec, i: usize, rng: &mut ChaCha8Rng) -> Result<Option<QueryInstance>> {
    let s = &spec.shelf;
    let dx = sym(rng, s.pose_jitter);
    let dy = sym(rng, s.pose_jitter);
    let tier = s.target_tiers[rng.gen_range(0..s.target_tiers.len())];
    let gap_half = (s.tier_height - s.slab_thickness) / 2.0;
    let target = [
        s.front_x + dx + s.depth - range(rng, s.target_inset),
        s.tier_center(tier, dy) + sym(rng, (gap_half * 0.3).min(0.1)),
    ];

    let mut obstacles = if s.with_shelf { shelf_obstacles(s, dx, dy) } else { vec![] };
    let n_clutter = rng.gen_range(s.clutter[0]..=s.clutter[1]);
    for _ in 0..n_clutter {
        let r = range(rng, s.clutter_radius);
        let x_lo = s.front_x + dx + r;
        let x_hi = target[0] - 0.15 - r;
        if x_hi <= x_lo {
            return Ok(None);
        }
        let (y_lo, y_hi) = (s.tier_center(tier, dy) - gap_half, s.tier_center(tier, dy) + gap_half);
        let c = [
            rng.gen_range(x_lo..=x_hi),
            (target[1] + sym(rng, s.clutter_offset)).clamp(y_lo, y_hi),
        ];
        obstacles.push(Obstacle::circle(c, r));
    }

    let label = format!("set{}-{i:04}-t{tier}", spec.set_id);
    let world = spec.world(obstacles)?;
    let query = match &spec.robot {
        RobotTemplate::Point2d => {
            let start = [
                s.start[0] + sym(rng, s.start_jitter),
                s.start[1] + sym(rng, s.start_jitter),
            ];
            let q = QueryInstance::unchecked(
                world,
                Configuration::new(start.to_vec())?,
                Configuration::new(target.to_vec())?,
                label,
            );
            if !grid_connected(&q)? {
                return Ok(None);
            }
            q
        }
        RobotTemplate::PlanarArm {
            link_lengths,
            base,
            rest,
        } => {
            let start: Vec<f64> = rest.iter().map(|r| r + sym(rng, s.start_jitter)).collect();
            let Some(goal) = arm_goal(&world, link_lengths, *base, target)? else {
                return Ok(None);
            };
            let q = QueryInstance::unchecked(world, Configuration::new(start)?, goal, label);
            if !arm_solvable(&q, mix_seed(&[spec.seed, spec.set_id as u64, i as u64, 0xa5]))? {
                return Ok(None);
            }
            q
        }
    };
    let checked = QueryInstance::new(query.world, query.q_start, query.q_goal, query.label);
    Ok(checked.ok())
}

/// Inverse kinematics with the last link horizontal, trying both elbows.
fn arm_goal(world: &World, links: &[f64], base: [f64; 2], tip: [f64; 2]) -> Result<Option<Configuration>> {
    let n = links.len();
    if n < 2 {
        return Ok(None);
    }
    // Earlier links beyond the first two stay straight with the last.
    let tail: f64 = links[2..].iter().sum();
    let wrist = [tip[0] - tail - base[0], tip[1] - base[1]];
    let (l1, l2) = (links[0], links[1]);
    let d2 = wrist[0] * wrist[0] + wrist[1] * wrist[1];
    let c2 = (d2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    if !(-1.0..=1.0).contains(&c2) {
        return Ok(None);
    }
    for sign in [1.0, -1.0] {
        let q2 = sign * c2.acos();
        let q1 = wrist[1].atan2(wrist[0]) - (l2 * q2.sin()).atan2(l1 + l2 * q2.cos());
        let mut q = vec![0.0; n];
        q[0] = wrap(q1);
        q[1] = wrap(q2);
        if n > 2 {
            q[2] = wrap(-(q1 + q2));
        }
        let q = Configuration::new(q)?;
        if world.is_valid_state(&q)? {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a < -PI {
        a += 2.0 * PI;
    }
    a
}

/// Point-robot solvability by flood fill over a fine grid of valid states.
fn grid_connected(q: &QueryInstance) -> Result<bool> {
    let world = &q.world;
    let delta = world.default_delta();
    let mut checker = SegmentChecker::new(world, delta);
    if !(checker.state(&q.q_start) && checker.state(&q.q_goal)) {
        return Ok(false);
    }
    let b = world.bounds();
    let nx = ((b[0][1] - b[0][0]) / GRID_STEP).round() as usize + 1;
    let ny = ((b[1][1] - b[1][0]) / GRID_STEP).round() as usize + 1;
    let point = |ix: usize, iy: usize| [b[0][0] + ix as f64 * GRID_STEP, b[1][0] + iy as f64 * GRID_STEP];
    let cell = |p: &[f64]| {
        let ix = (((p[0] - b[0][0]) / GRID_STEP).round() as usize).min(nx - 1);
        let iy = (((p[1] - b[1][0]) / GRID_STEP).round() as usize).min(ny - 1);
        (ix, iy)
    };
    let mut seen = vec![false; nx * ny];
    let (sx, sy) = cell(&q.q_start);
    if !checker.edge(&q.q_start, &point(sx, sy)) {
        return Ok(false);
    }
    let (gx, gy) = cell(&q.q_goal);
    if !checker.edge(&point(gx, gy), &q.q_goal) {
        return Ok(false);
    }
    let mut queue = VecDeque::from([(sx, sy)]);
    seen[sy * nx + sx] = true;
    while let Some((x, y)) = queue.pop_front() {
        if (x, y) == (gx, gy) {
            return Ok(true);
        }
        let here = point(x, y);
        let neighbours = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (ax, ay) in neighbours {
            if ax >= nx || ay >= ny || seen[ay * nx + ax] {
                continue;
            }
            let there = point(ax, ay);
            if checker.edge(&here, &there) {
                seen[ay * nx + ax] = true;
                queue.push_back((ax, ay));
            }
        }
    }
    Ok(false)
}

/// Arm solvability by an iteration-capped, virtually clocked RRTConnect run.
fn arm_solvable(q: &QueryInstance, seed: u64) -> Result<bool> {
    let params = PlannerParams {
        seed,
        clock: ClockMode::Virtual,
        timeout: f64::INFINITY,
        max_iterations: 20_000,
        ..PlannerParams::default()
    };
    Ok(rrtconnect_plan(q, &params).is_solved())
}
