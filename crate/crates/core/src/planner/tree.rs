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
use rand::Rng;

use crate::error::{Error, Result};
use crate::path::{Configuration, Direction, MicroSegment, PhasedState};
use crate::world::SegmentChecker;

#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode {
    pub state: PhasedState,
    pub parent: Option<usize>,
    /// Morphed segment from the parent's state to this node's state.
    pub inbound: Option<MicroSegment>,
    /// Number of times the node has been selected for expansion.
    pub weight: u64,
}

/// Outcome of a tree extension attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    Advanced(usize),
    Failed,
}

/// Fenwick tree over the selection masses `1/(w+1)`, so drawing a node and
/// bumping its weight are both logarithmic in the tree size.
#[derive(Clone, Debug, Default, PartialEq)]
struct MassIndex {
    tree: Vec<f64>,
}

impl MassIndex {
    fn push(&mut self, mass: f64) {
        let i = self.tree.len() + 1;
        // a new slot i covers (i - lowbit(i), i]; gather the children it absorbs
        let low = i & i.wrapping_neg();
        let mut sum = mass;
        let mut j = 1;
        while j < low {
            sum += self.tree[i - j - 1];
            j <<= 1;
        }
        self.tree.push(sum);
    }

    fn add(&mut self, index: usize, delta: f64) {
        let mut i = index + 1;
        while i <= self.tree.len() {
            self.tree[i - 1] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut i = self.tree.len();
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i - 1];
            i &= i - 1;
        }
        sum
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let n = self.tree.len();
        let mut pos = 0;
        let mut step = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next - 1] <= target {
                pos = next;
                target -= self.tree[next - 1];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}

fn mass(weight: u64) -> f64 {
    1.0 / (weight as f64 + 1.0)
}

/// Tree of phased states whose edges are morphed micro-segments.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperienceTree {
    nodes: Vec<TreeNode>,
    direction: Direction,
    /// Node configurations, flattened for nearest-neighbour scans.
    coords: Vec<f64>,
    masses: MassIndex,
}

impl ExperienceTree {
    pub fn new(root: PhasedState, direction: Direction) -> Self {
        let mut masses = MassIndex::default();
        masses.push(mass(0));
        Self {
            coords: root.q.coords().to_vec(),
            nodes: vec![TreeNode {
                state: root,
                parent: None,
                inbound: None,
                weight: 0,
            }],
            direction,
            masses,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Overrides node weights, mainly for inspecting the selection law.
    pub fn set_weight(&mut self, i: usize, weight: u64) {
        self.masses.add(i, mass(weight) - mass(self.nodes[i].weight));
        self.nodes[i].weight = weight;
    }

    /// Normalized selection probabilities `(1/(w+1)) / sum`.
    pub fn selection_probabilities(&self) -> Vec<f64> {
        let raw: Vec<f64> = self.nodes.iter().map(|n| 1.0 / (n.weight as f64 + 1.0)).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|r| r / total).collect()
    }

    /// Draws a node with probability proportional to `1/(w+1)` and bumps its
    /// weight.
    pub fn select_node<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let target = self.masses.total() * rng.gen::<f64>();
        let chosen = self.masses.find(target);
        let w = self.nodes[chosen].weight;
        self.set_weight(chosen, w + 1);
        chosen
    }

    /// Appends `psi` below `from` when every sample along it is valid.
    pub fn extend(&mut self, psi: MicroSegment, from: usize, checker: &mut SegmentChecker) -> Result<Extension> {
        let anchor = &self.nodes[from].state;
        if psi.first().q != anchor.q || psi.first().alpha != anchor.alpha {
            return Err(Error::AnchorMismatch);
        }
        if !checker.states(psi.states()) {
            return Ok(Extension::Failed);
        }
        let state = psi.last().clone();
        Ok(Extension::Advanced(self.push(TreeNode {
            state,
            parent: Some(from),
            inbound: Some(psi),
            weight: 0,
        })))
    }

    fn push(&mut self, node: TreeNode) -> usize {
        self.coords.extend_from_slice(&node.state.q);
        self.masses.push(mass(node.weight));
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Node closest to `q` in configuration space, phase ignored. Ties go
    /// to the lower index.
    pub fn nearest(&self, q: &Configuration) -> usize {
        nearest_flat(&self.coords, q)
    }

    /// Node indices from the root down to `leaf`.
    pub fn branch(&self, leaf: usize) -> Vec<usize> {
        let mut out = vec![leaf];
        let mut cur = leaf;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// States along the branch from the root to `leaf`, following the
    /// stored segments.
    pub fn branch_states(&self, leaf: usize) -> Vec<PhasedState> {
        let mut out = vec![self.nodes[0].state.clone()];
        for &i in &self.branch(leaf)[1..] {
            let seg = self.nodes[i].inbound.as_ref().expect("non-root node has a segment");
            out.extend(seg.states()[1..].iter().cloned());
        }
        out
    }
}

/// Index of the row of `coords` (rows of `q.len()` values) closest to `q`,
/// the lowest index winning ties.
pub(crate) fn nearest_flat(coords: &[f64], q: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, row) in coords.chunks_exact(q.len()).enumerate() {
        let d: f64 = row.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}
