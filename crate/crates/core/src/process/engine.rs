// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Incremental state of one process run.
//!
//! Besides the graph and a union-find over its components, the engine keeps
//! the 2-core of the graph up to date together with a parent pointer for
//! every vertex outside it. Following parent pointers from a vertex leads to
//! the core vertex whose pendant tree contains it (or, in a tree component,
//! to the component's root). This makes most decisions local:
//!
//! * endpoints in different components, or in a tree component: accept;
//! * the component would stay below the class' excess threshold: accept;
//! * both endpoints hang off the same core vertex: the new edge closes a
//!   cycle that forms a block of its own, and all forbidden minors are
//!   2-connected, so accept;
//! * otherwise the class test runs on the component's 2-core plus a path
//!   between the two attachment vertices, which is equivalent to testing
//!   the whole component plus the edge since membership of these classes
//!   is invariant under removing pendant trees and subdividing edges.
//!
//! The core is tested in its suppressed form (see [`Kernel`]), which is
//! rebuilt only after an accepted edge changed some core.

use std::collections::HashMap;

use crate::constraints::{ClassTester, GraphClass};
use crate::graph::{ComponentTracker, EdgeEffect, Graph};
use crate::process::kernel::{Kernel, Position};

const NONE: u32 = u32::MAX;

/// The unconstrained graph `G(n, t)` fed the same edges, tracked only for
/// its partition and excess.
#[derive(Debug, Clone)]
pub struct ErShadow {
    tracker: ComponentTracker,
    excess: usize,
}

impl ErShadow {
    pub fn new(n: usize) -> Self {
        ErShadow {
            tracker: ComponentTracker::new(n),
            excess: 0,
        }
    }

    pub fn add(&mut self, u: usize, v: usize) {
        let cyclic = |t: &ComponentTracker, x: usize| t.component_edges(x) >= t.component_vertices(x);
        let grows = if self.tracker.same_component(u, v) {
            cyclic(&self.tracker, u)
        } else {
            cyclic(&self.tracker, u) && cyclic(&self.tracker, v)
        };
        if grows {
            self.excess += 1;
        }
        self.tracker.record_edge(u, v);
    }

    pub fn excess(&self) -> usize {
        self.excess
    }

    pub fn tracker(&self) -> &ComponentTracker {
        &self.tracker
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Decisions that needed the full class test.
    pub class_tests: u64,
    /// Total vertices handed to the class test.
    pub tested_vertices: u64,
    /// Kernel rebuilds.
    pub kernel_builds: u64,
}

#[derive(Debug)]
pub struct Engine {
    class: GraphClass,
    graph: Graph,
    tracker: ComponentTracker,
    up: Vec<u32>,
    in_core: Vec<bool>,
    stamp: Vec<u32>,
    stamp_id: u32,
    local: Vec<u32>,
    core_list: Vec<usize>,
    test_edges: Vec<(usize, usize)>,
    tester: ClassTester,
    kernel: Kernel,
    min_label: Vec<usize>,
    giant: usize,
    er: Option<ErShadow>,
    queried: u64,
    stats: EngineStats,
}

impl Engine {
    pub fn new(n: usize, class: GraphClass, track_er: bool) -> Self {
        Engine {
            class,
            graph: Graph::new(n),
            tracker: ComponentTracker::new(n),
            up: vec![NONE; n],
            in_core: vec![false; n],
            stamp: vec![0; n],
            stamp_id: 0,
            local: vec![NONE; n],
            core_list: Vec::new(),
            test_edges: Vec::new(),
            tester: ClassTester::new(),
            kernel: Kernel::new(n),
            min_label: (0..n).collect(),
            giant: 0,
            er: track_er.then(|| ErShadow::new(n)),
            queried: 0,
            stats: EngineStats::default(),
        }
    }

    /// Engine whose state is `g`, as if its edges had been accepted in order.
    pub fn from_graph(g: &Graph, class: GraphClass) -> Self {
        let mut e = Engine::new(g.n(), class, false);
        for &(u, v) in g.edges() {
            e.accept(u, v);
        }
        e.queried = g.m() as u64;
        e
    }

    pub fn class(&self) -> GraphClass {
        self.class
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tracker(&self) -> &ComponentTracker {
        &self.tracker
    }

    pub fn er(&self) -> Option<&ErShadow> {
        self.er.as_ref()
    }

    pub fn queried(&self) -> u64 {
        self.queried
    }

    pub fn accepted(&self) -> usize {
        self.graph.m()
    }

    pub fn rejected(&self) -> u64 {
        self.queried - self.graph.m() as u64
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn in_core(&self, v: usize) -> bool {
        self.in_core[v]
    }

    /// Order of the largest component.
    pub fn giant_size(&self) -> usize {
        self.tracker.component_vertices(self.giant)
    }

    /// Whether `v` lies in the largest component (ties broken towards the
    /// component holding the smallest vertex).
    pub fn in_giant(&self, v: usize) -> bool {
        self.tracker.same_component(v, self.giant)
    }

    /// Query the next pair: decide, apply if accepted, and feed the shadow.
    /// The pair must be a non-edge and never queried before.
    pub fn query(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && !self.graph.has_edge(u, v));
        let accept = self.decide(u, v);
        self.apply(u, v, accept);
        accept
    }

    /// Record the outcome of a query decided by [`Engine::decide`].
    pub fn apply(&mut self, u: usize, v: usize, accept: bool) {
        self.queried += 1;
        if accept {
            self.accept(u, v);
        }
        if let Some(er) = &mut self.er {
            er.add(u, v);
        }
    }

    /// Would `graph + uv` stay in the class? Does not modify the graph.
    pub fn decide(&mut self, u: usize, v: usize) -> bool {
        if self.class == GraphClass::Unconstrained {
            return true;
        }
        let t = &self.tracker;
        if !t.same_component(u, v) || t.is_tree_component(u) {
            return true;
        }
        let threshold = self.class.excess_threshold();
        if t.component_edges(u) + 1 < t.component_vertices(u) + threshold {
            return true;
        }
        let x = self.attachment(u);
        let y = self.attachment(v);
        if x == y {
            return true;
        }
        self.kernel_test(x, y, u == x && v == y)
    }

    /// First core vertex on the way up from `v` (or the tree root).
    pub fn attachment(&self, mut v: usize) -> usize {
        while !self.in_core[v] {
            let p = self.up[v];
            if p == NONE {
                break;
            }
            v = p as usize;
        }
        v
    }

    /// [`Engine::decide`] without the kernel: the test graph is the whole
    /// 2-core of the component. Kept as a reference implementation.
    pub fn decide_unreduced(&mut self, u: usize, v: usize) -> bool {
        if self.class == GraphClass::Unconstrained {
            return true;
        }
        let t = &self.tracker;
        if !t.same_component(u, v) || t.is_tree_component(u) {
            return true;
        }
        let x = self.attachment(u);
        let y = self.attachment(v);
        x == y || self.core_pair_test(x, y, u == x && v == y)
    }

    /// Class test through the cached kernel of `x`'s component.
    fn kernel_test(&mut self, x: usize, y: usize, direct: bool) -> bool {
        let fresh = match self.kernel.anchor() {
            Some(a) => self.tracker.same_component(a, x),
            None => false,
        };
        if !fresh {
            self.kernel.build(&self.graph, &self.in_core, x, self.exact_kernel());
            self.stats.kernel_builds += 1;
        }
        let (ok, k) = self.kernel.test(&mut self.tester, self.class, x, y, direct);
        self.stats.class_tests += 1;
        self.stats.tested_vertices += k as u64;
        ok
    }

    /// Outerplanarity is the one supported class that is not invariant
    /// under subdivision.
    fn exact_kernel(&self) -> bool {
        self.class == GraphClass::Outerplanar
    }

    /// Class test on the core of `x`'s component plus an `x`–`y` connection,
    /// either a direct edge or a path through one extra vertex.
    fn core_pair_test(&mut self, x: usize, y: usize, direct: bool) -> bool {
        self.core_list.clear();
        self.core_list.push(x);
        self.local[x] = 0;
        let mut head = 0;
        while head < self.core_list.len() {
            let a = self.core_list[head];
            head += 1;
            for &b in self.graph.neighbors(a) {
                if self.in_core[b] && self.local[b] == NONE {
                    self.local[b] = self.core_list.len() as u32;
                    self.core_list.push(b);
                }
            }
        }
        self.test_edges.clear();
        for &a in &self.core_list {
            let la = self.local[a];
            for &b in self.graph.neighbors(a) {
                let lb = self.local[b];
                if lb != NONE && la < lb {
                    self.test_edges.push((la as usize, lb as usize));
                }
            }
        }
        let mut k = self.core_list.len();
        let (lx, ly) = (self.local[x] as usize, self.local[y] as usize);
        if direct {
            self.test_edges.push((lx, ly));
        } else {
            self.test_edges.push((lx, k));
            self.test_edges.push((k, ly));
            k += 1;
        }
        for &a in &self.core_list {
            self.local[a] = NONE;
        }
        let mut h = Graph::new(k);
        for &(a, b) in &self.test_edges {
            h.push_edge_unchecked(a, b);
        }
        self.tester.contains(self.class, &h)
    }

    /// Add `uv`, updating components, the core and the pendant forest.
    pub fn accept(&mut self, u: usize, v: usize) {
        let same = self.tracker.same_component(u, v);
        let tree_u = self.tracker.is_tree_component(u);
        let tree_v = self.tracker.is_tree_component(v);
        if same || (!tree_u && !tree_v) {
            self.kernel.invalidate();
        }
        if same {
            if tree_u {
                self.close_tree_cycle(u, v);
            } else {
                self.mark_to_core(u);
                self.mark_to_core(v);
            }
        } else {
            match (tree_u, tree_v) {
                (true, true) => {
                    if self.tracker.component_vertices(u) < self.tracker.component_vertices(v) {
                        self.hang(u, v);
                    } else {
                        self.hang(v, u);
                    }
                }
                (_, true) => self.hang(v, u),
                (true, false) => self.hang(u, v),
                (false, false) => {
                    self.mark_to_core(u);
                    self.mark_to_core(v);
                }
            }
        }
        self.graph.push_edge_unchecked(u, v);
        let (ru, rv) = (self.tracker.root(u), self.tracker.root(v));
        if self.tracker.record_edge(u, v) == EdgeEffect::Merged {
            let r = self.tracker.root(u);
            self.min_label[r] = self.min_label[ru].min(self.min_label[rv]);
            let g = self.tracker.root(self.giant);
            if g == r {
                self.giant = r;
            } else {
                let (sr, sg) = (
                    self.tracker.component_vertices(r),
                    self.tracker.component_vertices(g),
                );
                if sr > sg || (sr == sg && self.min_label[r] < self.min_label[g]) {
                    self.giant = r;
                }
            }
        }
    }

    /// Re-root the tree containing `a` at `a` and hang it below `b`.
    fn hang(&mut self, a: usize, b: usize) {
        let mut prev = NONE;
        let mut x = a as u32;
        while x != NONE {
            let next = self.up[x as usize];
            self.up[x as usize] = prev;
            prev = x;
            x = next;
        }
        self.up[a] = b as u32;
    }

    /// Mark the path from `v` up to the core as core.
    fn mark_to_core(&mut self, mut v: usize) {
        while !self.in_core[v] {
            let p = self.up[v];
            self.in_core[v] = true;
            self.up[v] = NONE;
            debug_assert!(p != NONE, "component without core");
            v = p as usize;
        }
    }

    /// `uv` closes the first cycle of a tree component.
    fn close_tree_cycle(&mut self, u: usize, v: usize) {
        self.stamp_id = self.stamp_id.wrapping_add(1);
        if self.stamp_id == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.stamp_id = 1;
        }
        let id = self.stamp_id;
        let mut x = u;
        loop {
            self.stamp[x] = id;
            match self.up[x] {
                NONE => break,
                p => x = p as usize,
            }
        }
        let mut lca = v;
        while self.stamp[lca] != id {
            lca = self.up[lca] as usize;
        }
        for start in [u, v] {
            let mut x = start;
            while x != lca {
                let p = self.up[x] as usize;
                self.in_core[x] = true;
                self.up[x] = NONE;
                x = p;
            }
        }
        // the old root's path now hangs below the cycle
        let mut prev = lca as u32;
        let mut p = self.up[lca];
        self.up[lca] = NONE;
        self.in_core[lca] = true;
        while p != NONE {
            let next = self.up[p as usize];
            self.up[p as usize] = prev;
            prev = p;
            p = next;
        }
    }

    /// Attachment vertex of every vertex, in one pass.
    pub fn attachments(&self) -> Vec<usize> {
        let n = self.graph.n();
        let mut att = vec![usize::MAX; n];
        for v in 0..n {
            if att[v] != usize::MAX {
                continue;
            }
            // walk up until a resolved vertex or the top, then fill the path
            let mut path = Vec::new();
            let mut x = v;
            let top = loop {
                if att[x] != usize::MAX {
                    break att[x];
                }
                path.push(x);
                if self.in_core[x] || self.up[x] == NONE {
                    break x;
                }
                x = self.up[x] as usize;
            };
            for p in path {
                att[p] = top;
            }
        }
        att
    }

    /// Exact number of forbidden non-edges.
    ///
    /// Pairs across components, inside tree components, inside components
    /// below the excess threshold or with a common attachment vertex are
    /// addable. Any other non-edge is decided by the kernel classes of its
    /// two attachment vertices, so one class test per pair of classes
    /// suffices.
    pub fn count_forbidden(&mut self) -> u64 {
        if self.class == GraphClass::Unconstrained {
            return 0;
        }
        let n = self.graph.n();
        let att = self.attachments();
        let mut weight = vec![0u64; n];
        for &a in &att {
            weight[a] += 1;
        }
        let threshold = self.class.excess_threshold();
        let mut done = vec![false; n];
        let mut forbidden = 0u64;
        for x in 0..n {
            let t = &self.tracker;
            if !self.in_core[x] || done[t.root(x)] {
                continue;
            }
            done[t.root(x)] = true;
            if t.component_edges(x) + 1 < t.component_vertices(x) + threshold {
                continue;
            }
            forbidden += self.census_component(x, &weight);
        }
        self.kernel.invalidate();
        forbidden
    }

    fn census_component(&mut self, x: usize, weight: &[u64]) -> u64 {
        let exact = self.exact_kernel();
        self.kernel.build(&self.graph, &self.in_core, x, exact);
        let lens: Vec<u32> = (0..self.kernel.chain_count() as u32)
            .map(|c| self.kernel.chain_len(c))
            .collect();
        // Vertices with equal keys are interchangeable against any vertex
        // off their chain. In exact mode a chain splits into its first,
        // middle and last vertices (or its only one).
        let key = |p: Position| match p {
            Position::Chain(c, i) if exact => {
                let len = lens[c as usize];
                let cat = if len == 1 {
                    0
                } else if i == 1 {
                    1
                } else if i == len {
                    3
                } else {
                    2
                };
                Position::Chain(c, cat)
            }
            p => p.class(),
        };
        let representative = |k: Position| match k {
            Position::Chain(c, 2) => Position::Chain(c, 2),
            Position::Chain(c, 3) => Position::Chain(c, lens[c as usize]),
            Position::Chain(c, _) => Position::Chain(c, 1),
            v => v,
        };
        // per key: total weight, vertex count
        let mut classes: HashMap<Position, (u64, u64)> = HashMap::new();
        let mut class_edges: HashMap<(Position, Position), u64> = HashMap::new();
        let mut chain_weights: HashMap<u32, Vec<u64>> = HashMap::new();
        for &a in self.kernel.members() {
            let pa = self.kernel.position(a);
            let ka = key(pa);
            let e = classes.entry(ka).or_default();
            e.0 += weight[a];
            e.1 += 1;
            if let Position::Chain(c, i) = pa {
                let ws = chain_weights
                    .entry(c)
                    .or_insert_with(|| vec![0; lens[c as usize] as usize]);
                ws[i as usize - 1] = weight[a];
            }
            for &b in self.graph.neighbors(a) {
                if a < b && self.in_core[b] {
                    let kb = key(self.kernel.position(b));
                    *class_edges.entry((ka.min(kb), ka.max(kb))).or_default() += 1;
                }
            }
        }
        let mut list: Vec<(Position, (u64, u64))> = classes.into_iter().collect();
        list.sort_unstable();
        let same_chain = |p: Position, q: Position| {
            matches!((p, q), (Position::Chain(c, _), Position::Chain(d, _)) if c == d)
        };

        let mut forbidden = 0;
        for (i, &(p, (wp, np))) in list.iter().enumerate() {
            for &(q, (wq, nq)) in &list[i + 1..] {
                if same_chain(p, q) {
                    continue;
                }
                let edges = class_edges.get(&(p, q)).copied().unwrap_or(0);
                let (rp, rq) = (representative(p), representative(q));
                let (direct_pairs, path_pairs) = (np * nq - edges, wp * wq - np * nq);
                let mut verdict =
                    |direct| self.kernel.test_positions(&mut self.tester, self.class, rp, rq, direct).0;
                if !exact {
                    if !verdict(false) {
                        forbidden += direct_pairs + path_pairs;
                    }
                    continue;
                }
                if direct_pairs > 0 && !verdict(true) {
                    forbidden += direct_pairs;
                }
                if path_pairs > 0 && !verdict(false) {
                    forbidden += path_pairs;
                }
            }
        }

        let mut chains: Vec<(u32, Vec<u64>)> = chain_weights.into_iter().collect();
        chains.sort_unstable();
        for (c, ws) in chains {
            let len = ws.len();
            if len < 2 {
                continue;
            }
            if !exact {
                let total: u64 = ws.iter().sum();
                let squares: u64 = ws.iter().map(|w| w * w).sum();
                let pairs = (total * total - squares) / 2 - (len as u64 - 1);
                let (a, b) = (Position::Chain(c, 1), Position::Chain(c, 2));
                if pairs > 0 && !self.kernel.test_positions(&mut self.tester, self.class, a, b, false).0 {
                    forbidden += pairs;
                }
                continue;
            }
            // decision depends on which of the three segments are empty
            let mut memo: HashMap<(bool, bool, bool, bool), bool> = HashMap::new();
            for i in 1..=len {
                for j in i + 1..=len {
                    let shape = (i == 1, j == i + 1, j == len);
                    let mut verdict = |direct: bool| {
                        *memo.entry((shape.0, shape.1, shape.2, direct)).or_insert_with(|| {
                            let (a, b) = (Position::Chain(c, i as u32), Position::Chain(c, j as u32));
                            self.kernel.test_positions(&mut self.tester, self.class, a, b, direct).0
                        })
                    };
                    let path_pairs = ws[i - 1] * ws[j - 1] - 1;
                    if j > i + 1 && !verdict(true) {
                        forbidden += 1;
                    }
                    if path_pairs > 0 && !verdict(false) {
                        forbidden += path_pairs;
                    }
                }
            }
        }
        forbidden
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::two_core_mask;
    use crate::process::stream::{EdgeStream, StreamMode};

    #[test]
    fn core_tracks_fresh_peeling() {
        for class in [GraphClass::Planar, GraphClass::Cactus, GraphClass::Unconstrained] {
            for seed in 0..20 {
                let n = 40;
                let mut e = Engine::new(n, class, true);
                for (i, (u, v)) in EdgeStream::new(n, seed, StreamMode::Lazy).take(70).enumerate() {
                    e.query(u, v);
                    if i % 7 == 0 {
                        let mask = two_core_mask(e.graph());
                        for x in 0..n {
                            assert_eq!(e.in_core(x), mask[x], "seed {seed} step {i} vertex {x}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_matches_unreduced_core() {
        for class in GraphClass::CONSTRAINED {
            for seed in 0..15 {
                let n = 30;
                let mut e = Engine::new(n, class, false);
                for (u, v) in EdgeStream::new(n, seed, StreamMode::Lazy).take(120) {
                    let fast = e.decide(u, v);
                    assert_eq!(fast, e.decide_unreduced(u, v), "{class} seed {seed}");
                    let mut h = e.graph().clone();
                    h.push_edge_unchecked(u, v);
                    assert_eq!(fast, class.contains(&h), "{class} seed {seed}");
                    e.apply(u, v, fast);
                }
            }
        }
    }

    #[test]
    fn census_matches_pairwise_count() {
        for class in GraphClass::CONSTRAINED {
            for seed in 0..10 {
                let n = 25;
                let mut e = Engine::new(n, class, false);
                for (u, v) in EdgeStream::new(n, seed, StreamMode::Lazy).take(60) {
                    e.query(u, v);
                }
                let g = e.graph().clone();
                let mut slow = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if !g.has_edge(u, v) {
                            let mut h = g.clone();
                            h.push_edge_unchecked(u, v);
                            slow += !class.contains(&h) as u64;
                        }
                    }
                }
                assert_eq!(e.count_forbidden(), slow, "{class} seed {seed}");
            }
        }
    }

    #[test]
    fn attachments_follow_pendant_trees() {
        let mut e = Engine::new(6, GraphClass::Planar, false);
        for (u, v) in [(3, 4), (4, 5), (0, 1), (1, 2), (2, 3), (0, 2)] {
            assert!(e.query(u, v));
        }
        let att = e.attachments();
        assert_eq!(att, vec![0, 1, 2, 2, 2, 2]);
        assert_eq!(e.attachment(5), 2);
    }

    #[test]
    fn giant_tie_break() {
        let mut e = Engine::new(6, GraphClass::Planar, false);
        e.query(4, 5);
        e.query(1, 2);
        assert!(e.in_giant(1) && !e.in_giant(4));
        assert_eq!(e.giant_size(), 2);
        e.query(3, 4);
        assert!(e.in_giant(5) && !e.in_giant(1));
    }

    #[test]
    fn er_excess_counts_bridges_between_cyclic_components() {
        let mut s = ErShadow::new(6);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            s.add(u, v);
        }
        assert_eq!(s.excess(), 0);
        s.add(2, 3);
        assert_eq!(s.excess(), 1);
    }
}
