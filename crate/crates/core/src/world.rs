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
//! Worlds and the validity oracle.
//!
//! Two robot models share one obstacle representation: a point moving in
//! the plane, and a planar serial arm whose links are zero-thickness line
//! segments. Obstacles are closed sets, so touching counts as collision.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::path::{Configuration, PhasedState};

/// Planar obstacle in workspace coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstacle {
    Rect {
        center: [f64; 2],
        half_extents: [f64; 2],
    },
    Circle {
        center: [f64; 2],
        radius: f64,
    },
}

impl Obstacle {
    pub fn rect(center: [f64; 2], half_extents: [f64; 2]) -> Self {
        Obstacle::Rect {
            center,
            half_extents,
        }
    }

    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        Obstacle::Circle { center, radius }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Obstacle::Rect {
                center,
                half_extents,
            } => {
                center.iter().all(|c| c.is_finite())
                    && half_extents.iter().all(|h| h.is_finite() && *h > 0.0)
            }
            Obstacle::Circle { center, radius } => {
                center.iter().all(|c| c.is_finite()) && radius.is_finite() && *radius > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("malformed obstacle {self:?}")))
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        match *self {
            Obstacle::Rect {
                center,
                half_extents,
            } => {
                (p[0] - center[0]).abs() <= half_extents[0]
                    && (p[1] - center[1]).abs() <= half_extents[1]
            }
            Obstacle::Circle { center, radius } => {
                let dx = p[0] - center[0];
                let dy = p[1] - center[1];
                dx * dx + dy * dy <= radius * radius
            }
        }
    }

    pub fn intersects_segment(&self, a: [f64; 2], b: [f64; 2]) -> bool {
        match *self {
            Obstacle::Rect {
                center,
                half_extents,
            } => segment_hits_box(a, b, center, half_extents),
            Obstacle::Circle { center, radius } => {
                let d = [b[0] - a[0], b[1] - a[1]];
                let len2 = d[0] * d[0] + d[1] * d[1];
                let t = if len2 > 0.0 {
                    (((center[0] - a[0]) * d[0] + (center[1] - a[1]) * d[1]) / len2)
                        .clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let px = a[0] + t * d[0] - center[0];
                let py = a[1] + t * d[1] - center[1];
                px * px + py * py <= radius * radius
            }
        }
    }
}

// Liang-Barsky clipping of the segment against a closed box.
fn segment_hits_box(a: [f64; 2], b: [f64; 2], center: [f64; 2], half: [f64; 2]) -> bool {
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for k in 0..2 {
        let lo = center[k] - half[k];
        let hi = center[k] + half[k];
        let d = b[k] - a[k];
        if d == 0.0 {
            if a[k] < lo || a[k] > hi {
                return false;
            }
            continue;
        }
        let mut ta = (lo - a[k]) / d;
        let mut tb = (hi - a[k]) / d;
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// A 2-D link segment produced by forward kinematics.
pub type LinkSegment = ([f64; 2], [f64; 2]);

#[derive(Clone, Debug, PartialEq)]
pub enum Robot {
    Point2d,
    PlanarArm {
        link_lengths: Vec<f64>,
        base: [f64; 2],
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct World {
    robot: Robot,
    bounds: Vec<[f64; 2]>,
    obstacles: Vec<Obstacle>,
}

impl World {
    pub fn new(robot: Robot, bounds: Vec<[f64; 2]>, obstacles: Vec<Obstacle>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::invalid("world has no dimensions"));
        }
        for b in &bounds {
            if !(b[0].is_finite() && b[1].is_finite() && b[0] < b[1]) {
                return Err(Error::invalid(format!("bad bounds {b:?}")));
            }
        }
        match &robot {
            Robot::Point2d => {
                if bounds.len() != 2 {
                    return Err(Error::dim(2, bounds.len()));
                }
            }
            Robot::PlanarArm { link_lengths, base } => {
                if link_lengths.len() != bounds.len() {
                    return Err(Error::dim(link_lengths.len(), bounds.len()));
                }
                if link_lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                    return Err(Error::invalid("link lengths must be positive"));
                }
                if !base.iter().all(|c| c.is_finite()) {
                    return Err(Error::invalid("arm base must be finite"));
                }
                let pi = std::f64::consts::PI;
                if bounds.iter().any(|b| b[0] < -pi || b[1] > pi) {
                    return Err(Error::invalid("arm joint bounds must lie within [-pi, pi]"));
                }
            }
        }
        for o in &obstacles {
            o.validate()?;
        }
        Ok(Self {
            robot,
            bounds,
            obstacles,
        })
    }

    pub fn point2d(bounds: [[f64; 2]; 2], obstacles: Vec<Obstacle>) -> Result<Self> {
        Self::new(Robot::Point2d, bounds.to_vec(), obstacles)
    }

    /// Planar arm with full `[-pi, pi]` joint ranges.
    pub fn planar_arm(link_lengths: Vec<f64>, base: [f64; 2], obstacles: Vec<Obstacle>) -> Result<Self> {
        let pi = std::f64::consts::PI;
        let bounds = vec![[-pi, pi]; link_lengths.len()];
        Self::new(Robot::PlanarArm { link_lengths, base }, bounds, obstacles)
    }

    pub fn robot(&self) -> &Robot {
        &self.robot
    }

    pub fn bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    /// Diagonal of the configuration-space bounding box.
    pub fn diameter(&self) -> f64 {
        self.bounds
            .iter()
            .map(|b| (b[1] - b[0]) * (b[1] - b[0]))
            .sum::<f64>()
            .sqrt()
    }

    /// Default check resolution: 1% of the configuration-space diameter.
    pub fn default_delta(&self) -> f64 {
        0.01 * self.diameter()
    }

    pub fn in_bounds(&self, q: &[f64]) -> bool {
        q.iter()
            .zip(&self.bounds)
            .all(|(x, b)| *x >= b[0] && *x <= b[1])
    }

    pub fn is_valid_state(&self, q: &Configuration) -> Result<bool> {
        q.check_dim(self.dim())?;
        Ok(self.valid_unchecked(q))
    }

    fn valid_unchecked(&self, q: &[f64]) -> bool {
        if !self.in_bounds(q) {
            return false;
        }
        match &self.robot {
            Robot::Point2d => {
                let p = [q[0], q[1]];
                !self.obstacles.iter().any(|o| o.contains(p))
            }
            Robot::PlanarArm { link_lengths, base } => {
                if self.obstacles.is_empty() {
                    return true;
                }
                let mut angle = 0.0;
                let mut joint = *base;
                for (l, dq) in link_lengths.iter().zip(q) {
                    angle += dq;
                    let next = [joint[0] + l * angle.cos(), joint[1] + l * angle.sin()];
                    if self.obstacles.iter().any(|o| o.intersects_segment(joint, next)) {
                        return false;
                    }
                    joint = next;
                }
                true
            }
        }
    }

    /// Link segments of the arm at `q`, base first.
    pub fn arm_fk(&self, q: &Configuration) -> Result<Vec<LinkSegment>> {
        let Robot::PlanarArm { link_lengths, base } = &self.robot else {
            return Err(Error::invalid("forward kinematics needs a planar arm world"));
        };
        q.check_dim(link_lengths.len())?;
        Ok(arm_links(link_lengths, *base, q))
    }

    /// Workspace point traced by the robot: the point itself or the arm tip.
    pub fn tip(&self, q: &[f64]) -> [f64; 2] {
        match &self.robot {
            Robot::Point2d => [q[0], q[1]],
            Robot::PlanarArm { link_lengths, base } => {
                arm_links(link_lengths, *base, q).last().map(|s| s.1).unwrap_or(*base)
            }
        }
    }

    /// Discretized validity of a piecewise-linear motion; see [`SegmentChecker`].
    pub fn is_valid_segment(&self, states: &[PhasedState], delta: f64) -> Result<bool> {
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::invalid(format!("check resolution {delta} must be positive")));
        }
        for s in states {
            s.q.check_dim(self.dim())?;
        }
        Ok(SegmentChecker::new(self, delta).states(states))
    }
}

pub(crate) fn arm_links(link_lengths: &[f64], base: [f64; 2], q: &[f64]) -> Vec<LinkSegment> {
    let mut out = Vec::with_capacity(link_lengths.len());
    let mut angle = 0.0;
    let mut joint = base;
    for (l, dq) in link_lengths.iter().zip(q) {
        angle += dq;
        let next = [joint[0] + l * angle.cos(), joint[1] + l * angle.sin()];
        out.push((joint, next));
        joint = next;
    }
    out
}

/// Validity checker that counts the state checks it performs.
///
/// Each waypoint-to-waypoint edge is subdivided into `2^k` equal steps, the
/// smallest power of two whose step does not exceed `delta`. Sample sets are
/// therefore nested as `delta` shrinks, which makes the verdict monotone in
/// the resolution. Edges are sampled from their lexicographically smaller
/// endpoint so a reversed edge visits bit-identical samples.
#[derive(Debug)]
pub struct SegmentChecker<'w> {
    world: &'w World,
    delta: f64,
    checks: u64,
    scratch: Vec<f64>,
}

impl<'w> SegmentChecker<'w> {
    pub fn new(world: &'w World, delta: f64) -> Self {
        Self {
            world,
            delta,
            checks: 0,
            scratch: Vec::new(),
        }
    }

    pub fn world(&self) -> &'w World {
        self.world
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn checks(&self) -> u64 {
        self.checks
    }

    pub fn state(&mut self, q: &[f64]) -> bool {
        self.checks += 1;
        self.world.valid_unchecked(q)
    }

    /// Checks one straight edge, endpoints included.
    pub fn edge(&mut self, a: &[f64], b: &[f64]) -> bool {
        self.state(a) && self.state(b) && self.interiors(&[(a, b)], self.delta, None)
    }

    /// Checks every waypoint, then the interior of every edge.
    pub fn states(&mut self, states: &[PhasedState]) -> bool {
        if !states.iter().all(|s| self.state(&s.q)) {
            return false;
        }
        let edges: SmallVec<[(&[f64], &[f64]); 8]> = states.windows(2).map(|w| (&w[0].q[..], &w[1].q[..])).collect();
        self.interiors(&edges, self.delta, None)
    }

    /// Re-checks states that already passed [`Self::states`] at the finer
    /// resolution `finer`, visiting only the samples the coarse pass
    /// skipped. Because sample sets nest, a `true` here means the states
    /// pass a full check at `finer`.
    pub fn recheck(&mut self, states: &[PhasedState], finer: f64) -> bool {
        let edges: SmallVec<[(&[f64], &[f64]); 8]> = states.windows(2).map(|w| (&w[0].q[..], &w[1].q[..])).collect();
        self.interiors(&edges, finer.min(self.delta), Some(self.delta))
    }

    /// Checks edge interiors coarse to fine: the midpoints of every edge
    /// first, then the quarter points, and so on. The visited samples are
    /// the same as a sequential sweep, so only the number of checks spent
    /// before a collision is found changes.
    ///
    /// With `done` set, levels already visited at that coarser resolution
    /// are skipped.
    fn interiors(&mut self, edges: &[(&[f64], &[f64])], delta: f64, done: Option<f64>) -> bool {
        let levels_for = |len: f64, delta: f64| {
            let mut k = 0u32;
            while len / (1u64 << k) as f64 > delta {
                k += 1;
            }
            k
        };
        let mut q = std::mem::take(&mut self.scratch);
        // per edge: ordered endpoints, levels needed, levels already covered
        type Planned<'e> = (&'e [f64], &'e [f64], u32, u32);
        let mut plan: SmallVec<[Planned; 8]> = SmallVec::with_capacity(edges.len());
        let mut levels = 0;
        for &(a, b) in edges {
            let (a, b) = if lex_less(b, a) { (b, a) } else { (a, b) };
            let len = crate::path::distance(a, b);
            let k = levels_for(len, delta);
            let skip = done.map_or(0, |d| levels_for(len, d));
            levels = levels.max(k);
            plan.push((a, b, k, skip));
        }
        let mut ok = true;
        'levels: for level in 1..=levels {
            for &(a, b, k, skip) in &plan {
                if k < level || level <= skip {
                    continue;
                }
                let steps = (1u64 << k) as f64;
                let stride = 1u64 << (k - level);
                // odd multiples of the stride are new at this level
                let mut i = stride;
                while i < 1u64 << k {
                    let t = i as f64 / steps;
                    q.clear();
                    q.extend(a.iter().zip(b).map(|(x, y)| x + t * (y - x)));
                    if !self.state(&q) {
                        ok = false;
                        break 'levels;
                    }
                    i += 2 * stride;
                }
            }
        }
        self.scratch = q;
        ok
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// A planning query: world, start, goal and a free-form label.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryInstance {
    pub world: World,
    pub q_start: Configuration,
    pub q_goal: Configuration,
    pub label: String,
}

impl QueryInstance {
    /// Builds a query, rejecting starts or goals that are not valid states.
    pub fn new(
        world: World,
        q_start: Configuration,
        q_goal: Configuration,
        label: impl Into<String>,
    ) -> Result<Self> {
        let q = Self::unchecked(world, q_start, q_goal, label);
        if !q.world.is_valid_state(&q.q_start)? {
            return Err(Error::invalid(format!("{}: start is not a valid state", q.label)));
        }
        if !q.world.is_valid_state(&q.q_goal)? {
            return Err(Error::invalid(format!("{}: goal is not a valid state", q.label)));
        }
        Ok(q)
    }

    /// Builds a query without checking start/goal validity. Planners still
    /// reject such queries with an `invalid_query` status.
    pub fn unchecked(
        world: World,
        q_start: Configuration,
        q_goal: Configuration,
        label: impl Into<String>,
    ) -> Self {
        Self {
            world,
            q_start,
            q_goal,
            label: label.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn cfg(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    fn st(v: &[f64], a: f64) -> PhasedState {
        PhasedState { q: cfg(v), alpha: a }
    }

    fn boxed() -> World {
        World::point2d(
            [[-10.0, 10.0], [-10.0, 10.0]],
            vec![Obstacle::rect([0.0, 0.0], [1.0, 1.0])],
        )
        .unwrap()
    }

    fn two_link(obstacles: Vec<Obstacle>) -> World {
        World::planar_arm(vec![1.0, 1.0], [0.0, 0.0], obstacles).unwrap()
    }

    #[test]
    fn point_inside_box_is_invalid() {
        let w = boxed();
        assert!(!w.is_valid_state(&cfg(&[0.0, 0.0])).unwrap());
        assert!(w.is_valid_state(&cfg(&[5.0, 5.0])).unwrap());
        assert!(!w.is_valid_state(&cfg(&[11.0, 0.0])).unwrap());
        assert!(matches!(
            w.is_valid_state(&cfg(&[0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn straight_arm_through_box_is_invalid() {
        let w = two_link(vec![Obstacle::rect([1.5, 0.0], [0.2, 0.2])]);
        assert!(!w.is_valid_state(&cfg(&[0.0, 0.0])).unwrap());
        assert!(w.is_valid_state(&cfg(&[FRAC_PI_2, 0.0])).unwrap());
    }

    #[test]
    fn forward_kinematics() {
        let w = two_link(vec![]);
        let segs = w.arm_fk(&cfg(&[0.0, 0.0])).unwrap();
        assert_eq!(segs, vec![([0.0, 0.0], [1.0, 0.0]), ([1.0, 0.0], [2.0, 0.0])]);

        let segs = w.arm_fk(&cfg(&[FRAC_PI_2, 0.0])).unwrap();
        let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12;
        assert!(close(segs[0].1, [0.0, 1.0]));
        assert!(close(segs[1].1, [0.0, 2.0]));

        // cumulative angles pi/4 and pi/2
        let segs = w.arm_fk(&cfg(&[FRAC_PI_4, FRAC_PI_4])).unwrap();
        let h = FRAC_PI_4.cos();
        assert!(close(segs[1].1, [h, h + 1.0]));

        assert!(w.arm_fk(&cfg(&[0.0])).is_err());
        assert!(boxed().arm_fk(&cfg(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn segment_checks() {
        let w = boxed();
        let free = [st(&[2.0, 2.0], 0.0), st(&[2.0, 5.0], 0.5), st(&[5.0, 5.0], 1.0)];
        assert!(w.is_valid_segment(&free, 0.01).unwrap());
        let starts_inside = [st(&[0.0, 0.0], 0.0), st(&[5.0, 5.0], 1.0)];
        assert!(!w.is_valid_segment(&starts_inside, 0.01).unwrap());
        assert!(w.is_valid_segment(&free, 0.0).is_err());
    }

    #[test]
    fn thin_wall_is_caught_between_free_endpoints() {
        let w = World::point2d(
            [[0.0, 2.0], [0.0, 2.0]],
            vec![Obstacle::rect([1.0, 1.0], [0.025, 1.0])],
        )
        .unwrap();
        let seg = [st(&[0.3, 1.0], 0.0), st(&[1.7, 1.3], 1.0)];
        assert!(!w.is_valid_segment(&seg, 0.01).unwrap());
        // oracle: dense sampling at a tenth of the resolution
        let (a, b) = (&seg[0].q, &seg[1].q);
        let n = (a.distance(b) / 0.001).ceil() as usize;
        let hit = (0..=n).any(|i| !w.is_valid_state(&a.lerp(b, i as f64 / n as f64)).unwrap());
        assert!(hit);
    }

    #[test]
    fn checker_counts_and_edge_sampling_is_symmetric() {
        let w = boxed();
        let mut c = SegmentChecker::new(&w, 0.5);
        assert!(c.edge(&[2.0, 2.0], &[2.0, 4.0]));
        // length 2 at resolution 0.5: four steps, five samples
        assert_eq!(c.checks(), 5);
        let mut c2 = SegmentChecker::new(&w, 0.5);
        assert!(c2.edge(&[2.0, 4.0], &[2.0, 2.0]));
        assert_eq!(c2.checks(), 5);
    }

    #[test]
    fn circle_checks() {
        let o = Obstacle::circle([0.0, 0.0], 1.0);
        assert!(o.contains([0.5, 0.5]));
        assert!(!o.contains([1.0, 1.0]));
        assert!(o.intersects_segment([-2.0, 0.5], [2.0, 0.5]));
        assert!(!o.intersects_segment([-2.0, 1.5], [2.0, 1.5]));
        assert!(o.intersects_segment([0.0, 0.0], [0.0, 0.0]));
    }

    #[test]
    fn construction_rejects_malformed_worlds() {
        assert!(World::point2d([[1.0, 0.0], [0.0, 1.0]], vec![]).is_err());
        assert!(World::point2d([[0.0, 1.0], [0.0, 1.0]], vec![Obstacle::circle([0.0, 0.0], 0.0)]).is_err());
        assert!(World::planar_arm(vec![1.0, -1.0], [0.0, 0.0], vec![]).is_err());
        assert!(World::new(
            Robot::PlanarArm { link_lengths: vec![1.0], base: [0.0, 0.0] },
            vec![[-4.0, 4.0]],
            vec![]
        )
        .is_err());
    }

    #[test]
    fn query_rejects_colliding_goal() {
        let w = boxed();
        assert!(QueryInstance::new(w.clone(), cfg(&[5.0, 5.0]), cfg(&[0.0, 0.0]), "q").is_err());
        assert!(QueryInstance::new(w, cfg(&[5.0, 5.0]), cfg(&[-5.0, 5.0]), "q").is_ok());
    }
}
