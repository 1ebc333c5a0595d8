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
//! SVG rendering of a query, the mapped prior, search trees and a solution.
//!
//! Everything is drawn in workspace coordinates. For the planar arm that
//! means tip traces: each configuration is reduced to its end-effector
//! position, and the arm itself is drawn at the start and goal poses.

use std::fmt::Write;

use crate::path::{Configuration, PathExperience, PhasedState};
use crate::planner::PlanResult;
use crate::world::{Obstacle, QueryInstance, Robot, World};

/// Output width in pixels; the height follows the workspace aspect ratio.
const WIDTH_PX: f64 = 800.0;
/// Joint-space samples per straight RRT edge when tracing an arm tip.
const ARM_EDGE_SAMPLES: usize = 8;

/// What to draw on top of the world.
#[derive(Clone, Copy, Debug, Default)]
pub struct Layers<'a> {
    pub prior: Option<&'a PathExperience>,
    pub result: Option<&'a PlanResult>,
}

/// Renders `query` with the given layers as a standalone SVG document. Each
/// layer is its own `<g>` group, in drawing order: obstacles, trees, prior,
/// path, endpoints.
pub fn render_svg(query: &QueryInstance, layers: Layers) -> String {
    let world = &query.world;
    let view = View::fit(world);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        WIDTH_PX,
        view.height_px(),
        WIDTH_PX,
        view.height_px()
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(&query.label));
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>"##
    );

    svg.push_str(r##"<g id="obstacles" fill="#9e9e9e" stroke="none">"##);
    svg.push('\n');
    for o in world.obstacles() {
        match o {
            Obstacle::Rect { center, half_extents } => {
                let (x, y) = view.px([center[0] - half_extents[0], center[1] + half_extents[1]]);
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}"/>"#,
                    2.0 * half_extents[0] * view.scale,
                    2.0 * half_extents[1] * view.scale
                );
            }
            Obstacle::Circle { center, radius } => {
                let (x, y) = view.px(*center);
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#, radius * view.scale);
            }
        }
    }
    svg.push_str("</g>\n");

    svg.push_str(r##"<g id="trees" fill="none" stroke-width="0.8">"##);
    svg.push('\n');
    if let Some(result) = layers.result {
        let colours = ["#4f8fd6", "#d68a4f"];
        for (k, tree) in result.search.trees.iter().enumerate() {
            let colour = colours[k % colours.len()];
            for node in tree.nodes() {
                if let Some(seg) = &node.inbound {
                    let pts: Vec<[f64; 2]> = seg.states().iter().map(|s| world.tip(&s.q)).collect();
                    polyline(&mut svg, &view, &pts, colour);
                }
            }
        }
        for (k, tree) in result.search.rrt_trees.iter().enumerate() {
            let colour = colours[k % colours.len()];
            for (child, parent) in tree.parents.iter().enumerate() {
                if let Some(p) = parent {
                    let pts = edge_trace(world, &tree.nodes[*p], &tree.nodes[child]);
                    polyline(&mut svg, &view, &pts, colour);
                }
            }
        }
    }
    svg.push_str("</g>\n");

    svg.push_str(r##"<g id="prior" fill="none" stroke-width="2" stroke-dasharray="6 4">"##);
    svg.push('\n');
    if let Some(prior) = layers.prior {
        polyline(&mut svg, &view, &traced(world, prior.states()), "#7b3fa0");
    }
    svg.push_str("</g>\n");

    svg.push_str(r##"<g id="path" fill="none" stroke-width="3">"##);
    svg.push('\n');
    if let Some(path) = layers.result.and_then(|r| r.path.as_ref()) {
        polyline(&mut svg, &view, &traced(world, path.states()), "#2e9d44");
    }
    svg.push_str("</g>\n");

    svg.push_str(r#"<g id="endpoints">"#);
    svg.push('\n');
    for (q, colour) in [(&query.q_start, "#1f5fbf"), (&query.q_goal, "#c0392b")] {
        if let Robot::PlanarArm { .. } = world.robot() {
            if let Ok(links) = world.arm_fk(q) {
                for (a, b) in links {
                    polyline(&mut svg, &view, &[a, b], colour);
                }
            }
        }
        let (x, y) = view.px(world.tip(q));
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{colour}"/>"#);
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

/// Tip positions along consecutive states, with arm edges interpolated in
/// joint space so the trace follows the real end-effector motion.
fn traced(world: &World, states: &[PhasedState]) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        if i == 0 {
            pts.push(world.tip(&s.q));
        } else {
            pts.extend(edge_trace(world, &states[i - 1].q, &s.q).into_iter().skip(1));
        }
    }
    pts
}

fn edge_trace(world: &World, a: &Configuration, b: &Configuration) -> Vec<[f64; 2]> {
    match world.robot() {
        Robot::Point2d => vec![world.tip(a), world.tip(b)],
        Robot::PlanarArm { .. } => (0..=ARM_EDGE_SAMPLES)
            .map(|k| world.tip(&a.lerp(b, k as f64 / ARM_EDGE_SAMPLES as f64)))
            .collect(),
    }
}

fn polyline(svg: &mut String, view: &View, pts: &[[f64; 2]], colour: &str) {
    if pts.len() < 2 {
        return;
    }
    svg.push_str(r#"<polyline points=""#);
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = view.px(*p);
        let sep = if i == 0 { "" } else { " " };
        let _ = write!(svg, "{sep}{x:.2},{y:.2}");
    }
    let _ = writeln!(svg, r#"" stroke="{colour}"/>"#);
}

/// Workspace-to-pixel mapping with y pointing up.
struct View {
    min: [f64; 2],
    max: [f64; 2],
    scale: f64,
}

impl View {
    fn fit(world: &World) -> Self {
        let (mut min, mut max) = match world.robot() {
            Robot::Point2d => {
                let b = world.bounds();
                ([b[0][0], b[1][0]], [b[0][1], b[1][1]])
            }
            Robot::PlanarArm { link_lengths, base } => {
                let reach: f64 = link_lengths.iter().sum();
                ([base[0] - reach, base[1] - reach], [base[0] + reach, base[1] + reach])
            }
        };
        for o in world.obstacles() {
            let (c, h) = match o {
                Obstacle::Rect { center, half_extents } => (*center, *half_extents),
                Obstacle::Circle { center, radius } => (*center, [*radius, *radius]),
            };
            for d in 0..2 {
                min[d] = min[d].min(c[d] - h[d]);
                max[d] = max[d].max(c[d] + h[d]);
            }
        }
        let margin = 0.02 * (max[0] - min[0]).max(max[1] - min[1]);
        for d in 0..2 {
            min[d] -= margin;
            max[d] += margin;
        }
        let scale = WIDTH_PX / (max[0] - min[0]);
        Self { min, max, scale }
    }

    fn height_px(&self) -> f64 {
        ((self.max[1] - self.min[1]) * self.scale).ceil()
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        ((p[0] - self.min[0]) * self.scale, (self.max[1] - p[1]) * self.scale)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::phase_parametrize;
    use crate::planner::{ertconnect_plan, rrtconnect_plan, PlannerParams};

    fn cfg(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    fn group_ids(svg: &str) -> Vec<String> {
        let doc = roxmltree::Document::parse(svg).expect("well-formed svg");
        doc.descendants()
            .filter(|n| n.has_tag_name("g"))
            .filter_map(|n| n.attribute("id").map(str::to_owned))
            .collect()
    }

    #[test]
    fn point_scene_has_all_layers() {
        let world = World::point2d(
            [[0.0, 5.0], [0.0, 5.0]],
            vec![Obstacle::rect([2.5, 2.5], [0.5, 1.5]), Obstacle::circle([1.0, 4.0], 0.3)],
        )
        .unwrap();
        let query = QueryInstance::new(world, cfg(&[0.5, 2.5]), cfg(&[4.5, 2.5]), "a<b & \"c\"").unwrap();
        let prior = phase_parametrize(&[cfg(&[0.0, 0.0]), cfg(&[4.0, 0.0])]).unwrap();
        let result = ertconnect_plan(&query, &prior, &PlannerParams::default());
        assert!(result.is_solved());
        let svg = render_svg(
            &query,
            Layers {
                prior: result.search.mapped_prior.as_ref(),
                result: Some(&result),
            },
        );
        assert_eq!(group_ids(&svg), ["obstacles", "trees", "prior", "path", "endpoints"]);
        assert!(svg.contains("a&lt;b &amp; &quot;c&quot;"));
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let obstacles = doc.descendants().find(|n| n.attribute("id") == Some("obstacles")).unwrap();
        assert_eq!(obstacles.children().filter(|n| n.is_element()).count(), 2);
    }

    #[test]
    fn arm_scene_traces_the_tip() {
        let world = World::planar_arm(vec![1.0, 1.0], [0.0, 0.0], vec![Obstacle::circle([0.0, 1.5], 0.2)]).unwrap();
        let query = QueryInstance::new(world, cfg(&[0.0, 0.0]), cfg(&[3.0, 0.0]), "arm").unwrap();
        let result = rrtconnect_plan(&query, &PlannerParams::default());
        assert!(result.is_solved());
        let svg = render_svg(&query, Layers { prior: None, result: Some(&result) });
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let path = doc.descendants().find(|n| n.attribute("id") == Some("path")).unwrap();
        let line = path.children().find(|n| n.has_tag_name("polyline")).unwrap();
        let n_points = line.attribute("points").unwrap().split(' ').count();
        let n_edges = result.path.as_ref().unwrap().len() - 1;
        assert_eq!(n_points, n_edges * ARM_EDGE_SAMPLES + 1);
    }

    #[test]
    fn bare_world_renders() {
        let world = World::point2d([[0.0, 2.0], [0.0, 1.0]], vec![]).unwrap();
        let query = QueryInstance::new(world, cfg(&[0.1, 0.1]), cfg(&[1.9, 0.9]), "").unwrap();
        let svg = render_svg(&query, Layers::default());
        assert_eq!(group_ids(&svg).len(), 5);
    }
}
