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
//! Worked examples, each checked against a value computed independently in
//! this file rather than by the library.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ertkit::bench::{
    build_experience_library, generate_scenarios, run_benchmark, scenario_tier, summarize, BenchConfig,
    BenchmarkRecord, ScenarioSpec,
};
use ertkit::experience::{map_experience, select_experience};
use ertkit::path::{phase_parametrize, Configuration, Direction, MicroSegment, PathExperience, PhasedState};
use ertkit::planner::{
    ert_plan, ertconnect_plan, generate_segment, morph_segment, rrtconnect_plan, trace_path, ExperienceTree,
    Extension, PlanStatus, PlannerKind, PlannerParams,
};
use ertkit::world::{Obstacle, QueryInstance, SegmentChecker, World};

fn cfg(v: &[f64]) -> Configuration {
    Configuration::new(v.to_vec()).unwrap()
}

fn st(v: &[f64], a: f64) -> PhasedState {
    PhasedState::new(cfg(v), a).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Cumulative arc-length fractions, computed directly.
fn arc_fractions(pts: &[[f64; 2]]) -> Vec<f64> {
    let mut acc = vec![0.0];
    for w in pts.windows(2) {
        let d = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
        acc.push(acc.last().unwrap() + d);
    }
    let total = *acc.last().unwrap();
    acc.iter().map(|a| a / total).collect()
}

fn line_path() -> PathExperience {
    phase_parametrize(&[cfg(&[0.0, 0.0]), cfg(&[1.0, 0.0]), cfg(&[3.0, 0.0])]).unwrap()
}

#[test]
fn arc_length_phases() {
    let want = arc_fractions(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]]);
    let got: Vec<f64> = line_path().states().iter().map(|s| s.alpha).collect();
    assert_eq!(got.len(), 3);
    for (g, w) in got.iter().zip(&want) {
        assert!(close(*g, *w, 1e-15), "{got:?} vs {want:?}");
    }
}

#[test]
fn interpolation_inside_an_edge() {
    // the second edge covers phases [1/3, 1]; 0.5 is a quarter of the way along
    let frac = (0.5 - 1.0 / 3.0) / (2.0 / 3.0);
    let want = 1.0 + frac * 2.0;
    let q = line_path().state_at(0.5).unwrap();
    assert!(close(q[0], want, 1e-12) && q[1] == 0.0, "{q:?}");
}

#[test]
fn segment_extraction_both_ways() {
    let path = line_path();
    let at = |a: f64| if a <= 1.0 / 3.0 { 3.0 * a } else { 1.0 + (a - 1.0 / 3.0) * 3.0 };
    let fwd = path.extract_segment(0.2, 0.4).unwrap();
    let want = [(at(0.2), 0.2), (1.0, 1.0 / 3.0), (at(0.4), 0.4)];
    assert_eq!(fwd.states().len(), 3);
    for (s, (x, a)) in fwd.states().iter().zip(want) {
        assert!(close(s.q[0], x, 1e-12) && close(s.alpha, a, 1e-15));
    }
    assert_eq!(fwd.direction(), Direction::Forward);

    let bwd = path.extract_segment(0.4, 0.2).unwrap();
    assert_eq!(bwd.direction(), Direction::Backward);
    assert_eq!(bwd.anchor_alpha(), 0.4);
    let reversed: Vec<&PhasedState> = fwd.states().iter().rev().collect();
    for (s, r) in bwd.states().iter().zip(reversed) {
        assert_eq!(s.q, r.q);
        assert_eq!(s.alpha, r.alpha);
    }
}

/// Whether segment `a`-`b` meets the closed box, by clipping the segment
/// parameter against each slab.
fn segment_hits_box(a: [f64; 2], b: [f64; 2], c: [f64; 2], h: [f64; 2]) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for i in 0..2 {
        let d = b[i] - a[i];
        let (lo, hi) = (c[i] - h[i], c[i] + h[i]);
        if d == 0.0 {
            if a[i] < lo || a[i] > hi {
                return false;
            }
        } else {
            let (u, v) = ((lo - a[i]) / d, (hi - a[i]) / d);
            t0 = t0.max(u.min(v));
            t1 = t1.min(u.max(v));
        }
    }
    t0 <= t1
}

#[test]
fn straight_arm_through_a_box() {
    let world = World::planar_arm(vec![1.0, 1.0], [0.0, 0.0], vec![Obstacle::rect([1.5, 0.0], [0.2, 0.2])]).unwrap();
    let q = cfg(&[0.0, 0.0]);
    let links = world.arm_fk(&q).unwrap();
    let oracle_hit = links.iter().any(|(a, b)| segment_hits_box(*a, *b, [1.5, 0.0], [0.2, 0.2]));
    assert!(oracle_hit);
    assert_eq!(world.is_valid_state(&q).unwrap(), !oracle_hit);
}

#[test]
fn thin_wall_is_caught_and_agrees_with_a_finer_sweep() {
    let world = World::point2d([[0.0, 2.0], [0.0, 2.0]], vec![Obstacle::rect([1.0, 1.0], [0.025, 1.0])]).unwrap();
    let seg = [st(&[0.5, 1.0], 0.0), st(&[1.5, 1.0], 1.0)];
    assert!(!world.is_valid_segment(&seg, 0.01).unwrap());
    // dense sweep at a tenth of the resolution
    let hit = (0..=1000).any(|k| {
        let x = 0.5 + k as f64 / 1000.0;
        (x - 1.0).abs() <= 0.025
    });
    assert!(hit);
}

#[test]
fn forward_kinematics_at_quarter_turns() {
    let world = World::planar_arm(vec![1.0, 1.0], [0.0, 0.0], vec![]).unwrap();
    let q = [std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4];
    let links = world.arm_fk(&cfg(&q)).unwrap();
    let (a1, a2) = (q[0], q[0] + q[1]);
    let tip = [a1.cos() + a2.cos(), a1.sin() + a2.sin()];
    assert!(close(links[1].1[0], tip[0], 1e-12) && close(links[1].1[1], tip[1], 1e-12));
    assert!(close(tip[0], 0.5f64.sqrt(), 1e-12) && close(tip[1], 0.5f64.sqrt() + 1.0, 1e-12));
}

#[test]
fn selection_picks_the_closest_endpoints() {
    let lib = vec![
        phase_parametrize(&[cfg(&[0.0, 0.0]), cfg(&[10.0, 0.0])]).unwrap(),
        phase_parametrize(&[cfg(&[1.0, 1.0]), cfg(&[9.0, 1.0])]).unwrap(),
    ];
    let (qs, qg) = (cfg(&[1.0, 1.0]), cfg(&[9.0, 1.0]));
    let score = |s: [f64; 2], g: [f64; 2]| ((s[0] - 1.0f64).hypot(s[1] - 1.0)) + ((g[0] - 9.0f64).hypot(g[1] - 1.0));
    let scores = [score([0.0, 0.0], [10.0, 0.0]), score([1.0, 1.0], [9.0, 1.0])];
    assert!(close(scores[0], 2.0 * 2f64.sqrt(), 1e-12) && scores[1] == 0.0);
    assert_eq!(select_experience(&lib, &qs, &qg).unwrap().0, 1);
}

#[test]
fn mapping_shears_the_prior() {
    let prior = PathExperience::new(vec![st(&[2.0, 3.0], 0.0), st(&[3.0, 3.5], 0.5), st(&[4.0, 4.0], 1.0)]).unwrap();
    let (qs, qg) = ([0.0, 0.0], [10.0, 10.0]);
    let b = [qs[0] - 2.0, qs[1] - 3.0];
    let lambda = [qg[0] - (4.0 + b[0]), qg[1] - (4.0 + b[1])];
    assert_eq!((b, lambda), ([-2.0, -3.0], [8.0, 9.0]));
    let mapped = map_experience(&prior, &cfg(&qs), &cfg(&qg)).unwrap();
    for (m, p) in mapped.states().iter().zip(prior.states()) {
        for i in 0..2 {
            assert!(close(m.q[i], p.q[i] + p.alpha * lambda[i] + b[i], 1e-12));
        }
    }
    assert_eq!(mapped.states()[1].q.coords(), &[5.0, 5.0]);
}

#[test]
fn morph_of_a_three_state_segment() {
    let seg = MicroSegment::new(vec![st(&[0.0, 0.0], 0.2), st(&[1.0, 0.0], 0.3), st(&[2.0, 0.0], 0.4)]).unwrap();
    let (b, lambda) = ([1.0, 1.0], [0.0, 2.0]);
    let out = morph_segment(&seg, &lambda, &b).unwrap();
    for (o, s) in out.states().iter().zip(seg.states()) {
        let rho = (s.alpha - 0.2) / 0.2;
        for i in 0..2 {
            assert!(close(o.q[i], s.q[i] + b[i] + rho * lambda[i], 1e-12));
        }
        assert_eq!(o.alpha, s.alpha);
    }
}

#[test]
fn connect_segment_lands_on_both_ends() {
    let prior = PathExperience::new(vec![st(&[2.0, 3.0], 0.0), st(&[3.0, 3.5], 0.5), st(&[4.0, 4.0], 1.0)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (init, goal) = (st(&[0.0, 0.0], 0.0), st(&[10.0, 10.0], 1.0));
    let (psi, end) =
        generate_segment(&init, Some(&goal), &prior, Direction::Forward, &PlannerParams::default(), &mut rng).unwrap();
    assert_eq!(end, goal);
    assert_eq!(psi.states()[0], init);
    assert_eq!(psi.states()[2], goal);
}

#[test]
fn explore_respects_the_shear_bound() {
    let prior = phase_parametrize(&[cfg(&[0.0, 0.0]), cfg(&[2.0, 1.0]), cfg(&[4.0, 0.0])]).unwrap();
    let params = PlannerParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let init = st(&[0.3, 0.8], 0.5);
    for _ in 0..500 {
        let (psi, _) = generate_segment(&init, None, &prior, Direction::Forward, &params, &mut rng).unwrap();
        assert_eq!(psi.states()[0], init);
        let span = psi.span();
        // recover lambda from the far end against the unmorphed slice
        let far = psi.states().last().unwrap();
        let src_far = prior.state_at(far.alpha).unwrap();
        let src_init = prior.state_at(0.5).unwrap();
        for i in 0..2 {
            let lambda = far.q[i] - src_far[i] - (init.q[i] - src_init[i]);
            assert!(lambda.abs() <= 5.0 * span + 1e-12);
        }
    }
}

#[test]
fn inverse_weight_probabilities() {
    let world = World::point2d([[0.0, 3.0], [0.0, 1.0]], vec![]).unwrap();
    let mut checker = SegmentChecker::new(&world, 0.1);
    let mut tree = ExperienceTree::new(st(&[0.0, 0.5], 0.0), Direction::Forward);
    for i in 1..3 {
        let seg = MicroSegment::new(vec![st(&[0.0, 0.5], 0.0), st(&[i as f64, 0.5], i as f64 / 3.0)]).unwrap();
        assert_eq!(tree.extend(seg, 0, &mut checker).unwrap(), Extension::Advanced(i));
    }
    for (i, w) in [0u64, 1, 3].iter().enumerate() {
        tree.set_weight(i, *w);
    }
    let raw = [1.0, 0.5, 0.25];
    let total: f64 = raw.iter().sum();
    for (p, r) in tree.selection_probabilities().iter().zip(raw) {
        assert!(close(*p, r / total, 1e-15));
    }
}

/// A vertical wall across the square with one gap.
fn wall_world(gap_y: f64) -> World {
    let below = gap_y - 0.4;
    let above = 4.0 - (gap_y + 0.4);
    World::point2d(
        [[0.0, 4.0], [0.0, 4.0]],
        vec![
            Obstacle::rect([2.0, below / 2.0], [0.1, below / 2.0]),
            Obstacle::rect([2.0, 4.0 - above / 2.0], [0.1, above / 2.0]),
        ],
    )
    .unwrap()
}

/// Samples every edge at a tenth of the planning resolution against the
/// boxes directly.
fn audit(world: &World, path: &PathExperience) -> bool {
    let delta = world.default_delta() / 10.0;
    path.states().windows(2).all(|w| {
        let (a, b) = (&w[0].q, &w[1].q);
        let n = (a.distance(b) / delta).ceil().max(1.0) as usize;
        (0..=n).all(|k| {
            let q = a.lerp(b, k as f64 / n as f64);
            world.obstacles().iter().all(|o| match *o {
                Obstacle::Rect { center, half_extents } => {
                    (q[0] - center[0]).abs() > half_extents[0] || (q[1] - center[1]).abs() > half_extents[1]
                }
                Obstacle::Circle { center, radius } => (q[0] - center[0]).hypot(q[1] - center[1]) > radius,
            }) && (0..2).all(|i| q[i] >= 0.0 && q[i] <= 4.0)
        })
    })
}

fn endpoints_match(path: &PathExperience, q: &QueryInstance) -> bool {
    path.start() == &q.q_start && path.goal() == &q.q_goal
}

#[test]
fn wall_with_gap_is_solved_by_every_planner() {
    let query = QueryInstance::new(wall_world(1.0), cfg(&[0.5, 2.0]), cfg(&[3.5, 2.0]), "wall").unwrap();
    // the prior crosses where the gap would be at y = 3
    let prior = phase_parametrize(&[cfg(&[0.5, 2.0]), cfg(&[2.0, 3.0]), cfg(&[3.5, 2.0])]).unwrap();
    let params = PlannerParams {
        seed: 4,
        ..PlannerParams::default()
    };
    for result in [
        ert_plan(&query, &prior, &params),
        ertconnect_plan(&query, &prior, &params),
        rrtconnect_plan(&query, &params),
    ] {
        assert_eq!(result.status, PlanStatus::Solved);
        let path = result.path.unwrap();
        assert!(endpoints_match(&path, &query));
        assert!(audit(&query.world, &path));
    }
}

#[test]
fn symmetric_corridor_with_ertconnect() {
    // a horizontal corridor; the prior runs straight through the upper wall
    let world = World::point2d(
        [[0.0, 4.0], [0.0, 4.0]],
        vec![Obstacle::rect([2.0, 3.0], [1.0, 0.6]), Obstacle::rect([2.0, 1.0], [1.0, 0.6])],
    )
    .unwrap();
    let query = QueryInstance::new(world, cfg(&[0.3, 2.0]), cfg(&[3.7, 2.0]), "corridor").unwrap();
    let prior = phase_parametrize(&[cfg(&[0.0, 0.0]), cfg(&[1.7, 1.0]), cfg(&[3.4, 0.0])]).unwrap();
    let params = PlannerParams {
        seed: 12,
        ..PlannerParams::default()
    };
    let result = ertconnect_plan(&query, &prior, &params);
    assert_eq!(result.status, PlanStatus::Solved);
    let path = result.path.unwrap();
    assert!(endpoints_match(&path, &query));
    assert!(audit(&query.world, &path));
    // monotone in phase from start to goal
    assert!(path.states().windows(2).all(|w| w[0].alpha < w[1].alpha));
}

#[test]
fn five_segment_trace() {
    let world = World::point2d([[0.0, 10.0], [0.0, 1.0]], vec![]).unwrap();
    let mut checker = SegmentChecker::new(&world, 0.1);
    let seg = |a: f64, b: f64| MicroSegment::new(vec![st(&[a, 0.5], a / 10.0), st(&[b, 0.5], b / 10.0)]).unwrap();
    let mut fwd = ExperienceTree::new(st(&[0.0, 0.5], 0.0), Direction::Forward);
    fwd.extend(seg(0.0, 2.0), 0, &mut checker).unwrap();
    fwd.extend(seg(2.0, 4.0), 1, &mut checker).unwrap();
    let mut bwd = ExperienceTree::new(st(&[10.0, 0.5], 1.0), Direction::Backward);
    bwd.extend(seg(10.0, 8.0), 0, &mut checker).unwrap();
    bwd.extend(seg(8.0, 6.0), 1, &mut checker).unwrap();
    let bridge = seg(4.0, 6.0);
    let traced = trace_path(Some((&fwd, 2)), Some(&bridge), Some((&bwd, 2))).unwrap();
    let xs: Vec<f64> = traced.path.states().iter().map(|s| s.q[0]).collect();
    // 5 segments give 6 distinct junction-deduplicated states
    assert_eq!(xs, [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
    assert_eq!(traced.path.states().len() - 1, 5);
}

#[test]
fn set_three_spans_several_tiers() {
    let suite = generate_scenarios(&ScenarioSpec::new(3, 100, 42).unwrap()).unwrap();
    let mut tiers: Vec<usize> = suite.iter().map(|q| scenario_tier(&q.label).unwrap()).collect();
    tiers.sort_unstable();
    tiers.dedup();
    assert!(tiers.len() >= 2, "{tiers:?}");
}

#[test]
fn library_paths_are_valid_in_their_generator_worlds() {
    let params = PlannerParams::default();
    let template = ScenarioSpec::new(2, 1, 8).unwrap();
    let lib = build_experience_library(5, 8, &template, &params).unwrap();
    let generator = ertkit::bench::generator_spec(5, 8).unwrap();
    let mut spec = generator.clone();
    spec.robot = template.robot.clone();
    let suite = generate_scenarios(&{
        let mut s = spec;
        s.shelf.tiers = template.shelf.tiers;
        s.shelf.tier_height = template.shelf.tier_height;
        s.shelf.depth = template.shelf.depth;
        s.shelf.front_x = template.shelf.front_x;
        s.shelf.bottom_y = template.shelf.bottom_y;
        s.shelf.slab_thickness = template.shelf.slab_thickness;
        s.shelf.start = template.shelf.start;
        s.shelf.target_tiers = vec![s.shelf.middle_tier()];
        s
    })
    .unwrap();
    for (xi, q) in lib.experiences().iter().zip(&suite) {
        assert!(q.world.obstacles().is_empty());
        assert!(endpoints_match(xi, q));
        assert!(q.world.is_valid_segment(xi.states(), q.world.default_delta()).unwrap());
    }
}

#[test]
fn rerun_gives_identical_statuses() {
    let suite = generate_scenarios(&ScenarioSpec::new(2, 30, 5).unwrap()).unwrap();
    let lib = build_experience_library(1, 5, &ScenarioSpec::new(2, 1, 5).unwrap(), &PlannerParams::default()).unwrap();
    let cfg = BenchConfig {
        planners: vec![PlannerKind::ErtConnect, PlannerKind::RrtConnect],
        library_sizes: vec![1],
        repetitions: 2,
        params: PlannerParams::default(),
        threads: Some(2),
    };
    let statuses = |recs: Vec<BenchmarkRecord>| -> Vec<(String, PlanStatus, u64)> {
        recs.into_iter().map(|r| (r.scenario, r.status, r.seed)).collect()
    };
    let a = statuses(run_benchmark(&suite, &lib, &cfg).unwrap());
    let b = statuses(run_benchmark(&suite, &lib, &cfg).unwrap());
    assert_eq!(a.len(), 30 * 2 * 2);
    assert_eq!(a, b);
}

#[test]
fn summary_matches_a_direct_aggregation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    use rand::Rng;
    let planners = [PlannerKind::Ert, PlannerKind::ErtConnect, PlannerKind::RrtConnect];
    let records: Vec<BenchmarkRecord> = (0..100)
        .map(|i| {
            let planner = planners[i % 3];
            let status = match rng.gen_range(0..10) {
                0..=6 => PlanStatus::Solved,
                7 | 8 => PlanStatus::Timeout,
                _ => PlanStatus::InvalidQuery,
            };
            BenchmarkRecord {
                instance: i / 3,
                scenario: format!("set{}-{:04}-t2", 2 + i % 2, i / 3),
                planner,
                lib_size: if planner == PlannerKind::RrtConnect { 0 } else { 1 },
                rep: 0,
                seed: i as u64,
                status,
                elapsed_s: rng.gen_range(0.001..2.0),
                iterations: 0,
                validity_checks: 0,
                selection_seconds: 0.0,
                path: None,
            }
        })
        .collect();
    let rows = summarize(&records).unwrap();
    let mut seen = 0;
    for planner in planners {
        for set in [2u8, 3] {
            let group: Vec<&BenchmarkRecord> = records
                .iter()
                .filter(|r| r.planner == planner && r.scenario.starts_with(&format!("set{set}-")))
                .collect();
            if group.is_empty() {
                continue;
            }
            seen += 1;
            let mut times: Vec<f64> = group.iter().filter(|r| r.status == PlanStatus::Solved).map(|r| r.elapsed_s).collect();
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let solved = times.len();
            let median = if solved == 0 {
                None
            } else if solved % 2 == 1 {
                Some(times[solved / 2])
            } else {
                Some(0.5 * (times[solved / 2 - 1] + times[solved / 2]))
            };
            let mean = (solved > 0).then(|| times.iter().sum::<f64>() / solved as f64);
            let row = rows.iter().find(|r| r.planner == planner && r.set == Some(set)).unwrap();
            assert_eq!(row.runs, group.len());
            assert_eq!(row.solved, solved);
            assert_eq!(row.timeouts, group.iter().filter(|r| r.status == PlanStatus::Timeout).count());
            assert!(close(row.success_rate, solved as f64 / group.len() as f64, 1e-15));
            assert_eq!(row.median_s, median);
            match (row.mean_s, mean) {
                (Some(a), Some(b)) => assert!(close(a, b, 1e-12)),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
    assert_eq!(rows.len(), seen);
}
