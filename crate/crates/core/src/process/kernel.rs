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

//! The 2-core of one component with its degree-2 paths suppressed.
//!
//! Kernel vertices are the core vertices of core degree at least three (or
//! a single designated vertex when the core is a cycle). Every other core
//! vertex lies inside a chain, a path of degree-2 vertices joining two
//! kernel vertices.
//!
//! Cactus, series-parallel and planar membership does not change under
//! subdivision, so chains can be replaced by single edges. Outerplanarity
//! does (subdividing the middle edge of a diamond gives `K_{2,3}`), but it
//! is unchanged by subdividing an edge that already has an end of degree
//! two, so in exact mode a chain keeps one interior vertex if it has any.
//!
//! Only the blocks on the block-cut tree path between `x` and `y` can
//! change when the two are joined, so a test reads just those.

use std::collections::HashSet;

use crate::constraints::{edge_blocks, ClassTester, GraphClass};
use crate::graph::Graph;

const NONE: u32 = u32::MAX;

/// Where a core vertex sits in the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Vertex(u32),
    /// Chain id and index (from 1) along the chain.
    Chain(u32, u32),
}

impl Position {
    /// Vertices with the same class are interchangeable for a
    /// subdivision-invariant test.
    pub fn class(self) -> Position {
        match self {
            Position::Chain(c, _) => Position::Chain(c, 0),
            v => v,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Chain {
    a: u32,
    b: u32,
    len: u32,
    /// Block-cut tree node holding the chain's interior.
    node: u32,
}

#[derive(Debug, Default)]
pub struct Kernel {
    /// Some core vertex of the component this kernel describes.
    anchor: Option<usize>,
    kid: Vec<u32>,
    chain_of: Vec<u32>,
    idx: Vec<u32>,
    members: Vec<usize>,
    k: usize,
    chains: Vec<Chain>,
    exact: bool,
    /// Test-graph edges of all chains grouped by block; parallel chains and
    /// loops are subdivided to keep the graph simple.
    base: Vec<(usize, usize)>,
    base_chain: Vec<u32>,
    base_n: usize,
    block_range: Vec<(u32, u32)>,
    /// Block-cut tree: blocks are nodes `0..blocks`, cut vertices follow.
    node_of_kernel: Vec<u32>,
    parent: Vec<u32>,
    depth: Vec<u32>,
    // scratch
    edges: Vec<(usize, usize)>,
    local: Vec<u32>,
    stamp: Vec<u32>,
    stamp_id: u32,
    path: Vec<u32>,
}

impl Kernel {
    pub fn new(n: usize) -> Self {
        Kernel {
            kid: vec![NONE; n],
            chain_of: vec![NONE; n],
            idx: vec![0; n],
            ..Default::default()
        }
    }

    pub fn invalidate(&mut self) {
        self.anchor = None;
    }

    pub fn anchor(&self) -> Option<usize> {
        self.anchor
    }

    /// Core vertices of the described component.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn kernel_order(&self) -> usize {
        self.k
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_range.len()
    }

    pub fn position(&self, v: usize) -> Position {
        if self.kid[v] != NONE {
            Position::Vertex(self.kid[v])
        } else {
            debug_assert!(self.chain_of[v] != NONE, "vertex {v} not in kernel");
            Position::Chain(self.chain_of[v], self.idx[v])
        }
    }

    pub fn chain_len(&self, c: u32) -> u32 {
        self.chains[c as usize].len
    }

    /// Whether chain lengths are kept up to "none or some".
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Rebuild for the core component containing the core vertex `x`.
    pub fn build(&mut self, g: &Graph, in_core: &[bool], x: usize, exact: bool) {
        self.exact = exact;
        for &v in &self.members {
            self.kid[v] = NONE;
            self.chain_of[v] = NONE;
        }
        self.members.clear();
        self.chains.clear();
        self.anchor = Some(x);

        self.members.push(x);
        self.kid[x] = 0; // visited marker during the search
        let mut head = 0;
        while head < self.members.len() {
            let a = self.members[head];
            head += 1;
            for &b in g.neighbors(a) {
                if in_core[b] && self.kid[b] == NONE {
                    self.kid[b] = 0;
                    self.members.push(b);
                }
            }
        }
        let core_degree = |v: usize| g.neighbors(v).iter().filter(|&&w| in_core[w]).count();
        self.k = 0;
        for i in 0..self.members.len() {
            let v = self.members[i];
            self.kid[v] = NONE;
            if core_degree(v) >= 3 {
                self.kid[v] = self.k as u32;
                self.k += 1;
            }
        }
        if self.k == 0 {
            self.kid[x] = 0;
            self.k = 1;
        }

        for i in 0..self.members.len() {
            let a = self.members[i];
            if self.kid[a] == NONE {
                continue;
            }
            for &w in g.neighbors(a) {
                if !in_core[w] {
                    continue;
                }
                if self.kid[w] != NONE {
                    if self.kid[a] < self.kid[w] {
                        self.push_chain(self.kid[a], self.kid[w], 0);
                    }
                    continue;
                }
                if self.chain_of[w] != NONE {
                    continue;
                }
                let c = self.chains.len() as u32;
                let (mut prev, mut cur, mut i) = (a, w, 1);
                while self.kid[cur] == NONE {
                    self.chain_of[cur] = c;
                    self.idx[cur] = i;
                    i += 1;
                    let next = g
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&z| in_core[z] && z != prev)
                        .expect("chain vertex has two core neighbours");
                    prev = cur;
                    cur = next;
                }
                self.push_chain(self.kid[a], self.kid[cur], i - 1);
            }
        }
        self.build_base();
        self.build_block_tree();
    }

    fn push_chain(&mut self, a: u32, b: u32, len: u32) {
        self.chains.push(Chain {
            a,
            b,
            len,
            node: NONE,
        });
    }

    fn build_base(&mut self) {
        let exact = self.exact;
        // direct kernel edges claim their pair first
        let mut used: HashSet<(u32, u32)> = HashSet::new();
        for ch in &self.chains {
            if ch.len == 0 {
                used.insert((ch.a.min(ch.b), ch.a.max(ch.b)));
            }
        }
        self.base.clear();
        self.base_chain.clear();
        let mut next_vertex = self.k;
        for (c, ch) in self.chains.iter().enumerate() {
            let (a, b) = (ch.a as usize, ch.b as usize);
            let before = self.base.len();
            if a == b {
                let (s, t) = (next_vertex, next_vertex + 1);
                next_vertex += 2;
                self.base.extend([(a, s), (s, t), (t, a)]);
            } else if ch.len == 0 || (!exact && used.insert((ch.a.min(ch.b), ch.a.max(ch.b)))) {
                self.base.push((a, b));
            } else {
                let s = next_vertex;
                next_vertex += 1;
                self.base.extend([(a, s), (s, b)]);
            }
            let added = self.base.len() - before;
            self.base_chain.extend(std::iter::repeat(c as u32).take(added));
        }
        self.base_n = next_vertex;
    }

    fn build_block_tree(&mut self) {
        let n = self.base_n;
        let (block_of, blocks) = edge_blocks(n, &self.base);

        // group the edges by block
        let mut order: Vec<usize> = (0..self.base.len()).collect();
        order.sort_by_key(|&e| block_of[e]);
        self.base = order.iter().map(|&e| self.base[e]).collect();
        self.base_chain = order.iter().map(|&e| self.base_chain[e]).collect();
        let sorted_block: Vec<usize> = order.iter().map(|&e| block_of[e]).collect();
        self.block_range = vec![(0, 0); blocks];
        let mut start = 0;
        for b in 0..blocks {
            let mut end = start;
            while end < sorted_block.len() && sorted_block[end] == b {
                end += 1;
            }
            self.block_range[b] = (start as u32, end as u32);
            start = end;
        }

        // blocks of every vertex, then cut vertices
        let mut vertex_blocks: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (e, &(u, v)) in self.base.iter().enumerate() {
            let b = sorted_block[e] as u32;
            for w in [u, v] {
                if vertex_blocks[w].last() != Some(&b) {
                    vertex_blocks[w].push(b);
                }
            }
        }
        let mut node_of_vertex = vec![NONE; n];
        let mut nodes = blocks;
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); blocks];
        for v in 0..n {
            let bs = &mut vertex_blocks[v];
            bs.sort_unstable();
            bs.dedup();
            match bs.len() {
                0 => {}
                1 => node_of_vertex[v] = bs[0],
                _ => {
                    let id = nodes as u32;
                    nodes += 1;
                    node_of_vertex[v] = id;
                    adjacency.push(bs.clone());
                    for &b in bs.iter() {
                        adjacency[b as usize].push(id);
                    }
                }
            }
        }
        self.node_of_kernel = node_of_vertex[..self.k].to_vec();
        let mut first_edge = vec![NONE; self.chains.len()];
        for (e, &c) in self.base_chain.iter().enumerate().rev() {
            first_edge[c as usize] = e as u32;
        }
        for (c, &e) in first_edge.iter().enumerate() {
            let ch = &mut self.chains[c];
            let e = e as usize;
            // the chain's middle test vertex, or its only edge
            let (u, v) = self.base[e];
            let inner = u.max(v);
            ch.node = if ch.a != ch.b && inner >= self.k {
                node_of_vertex[inner]
            } else {
                sorted_block[e] as u32
            };
        }

        self.parent = vec![NONE; nodes];
        self.depth = vec![0; nodes];
        let mut queue = vec![0u32];
        let mut seen = vec![false; nodes];
        seen[0] = true;
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head] as usize;
            head += 1;
            for &b in &adjacency[a] {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    self.parent[b as usize] = a as u32;
                    self.depth[b as usize] = self.depth[a] + 1;
                    queue.push(b);
                }
            }
        }
        if self.local.len() < n + 8 {
            self.local.resize(n + 8, 0);
            self.stamp.resize(n + 8, 0);
        }
    }

    fn node_of(&self, p: Position) -> u32 {
        match p {
            Position::Vertex(k) => self.node_of_kernel[k as usize],
            Position::Chain(c, _) => self.chains[c as usize].node,
        }
    }

    /// Whether the core plus a connection between the distinct core
    /// vertices `x` and `y` lies in `class`. The connection is the edge
    /// `xy` if `direct` (and the kernel is exact), else a path. Returns the
    /// decision and the order of the tested graph.
    pub fn test(
        &mut self,
        tester: &mut ClassTester,
        class: GraphClass,
        x: usize,
        y: usize,
        direct: bool,
    ) -> (bool, usize) {
        let (px, py) = (self.position(x), self.position(y));
        self.test_positions(tester, class, px, py, direct)
    }

    /// As [`Kernel::test`], for positions. Two chain positions on the same
    /// chain must have distinct indices.
    pub fn test_positions(
        &mut self,
        tester: &mut ClassTester,
        class: GraphClass,
        px: Position,
        py: Position,
        direct: bool,
    ) -> (bool, usize) {
        let exact = self.exact;
        let mut n = self.base_n;
        let mut fresh = || {
            n += 1;
            n - 1
        };
        let mut split: Vec<(u32, u32, usize)> = Vec::with_capacity(2);
        let mut vertex_of = |p: Position, split: &mut Vec<(u32, u32, usize)>| match p {
            Position::Vertex(k) => k as usize,
            Position::Chain(c, i) => {
                let id = fresh();
                split.push((c, i, id));
                id
            }
        };
        let vx = vertex_of(px, &mut split);
        let vy = vertex_of(py, &mut split);
        split.sort_unstable();

        // blocks on the tree path
        self.path.clear();
        let (mut a, mut b) = (self.node_of(px), self.node_of(py));
        while a != b {
            if self.depth[a as usize] >= self.depth[b as usize] {
                self.path.push(a);
                a = self.parent[a as usize];
            } else {
                self.path.push(b);
                b = self.parent[b as usize];
            }
        }
        self.path.push(a);

        self.edges.clear();
        let blocks = self.block_range.len() as u32;
        let (c0, c1) = (
            split.first().map_or(NONE, |s| s.0),
            split.last().map_or(NONE, |s| s.0),
        );
        for &node in &self.path {
            if node >= blocks {
                continue;
            }
            let (s, e) = self.block_range[node as usize];
            for i in s as usize..e as usize {
                let c = self.base_chain[i];
                if c != c0 && c != c1 {
                    self.edges.push(self.base[i]);
                }
            }
        }

        let mut i = 0;
        while i < split.len() {
            let c = split[i].0;
            let ch = self.chains[c as usize];
            // (vertex, index along the chain)
            let mut points = vec![(ch.a as usize, 0)];
            while i < split.len() && split[i].0 == c {
                points.push((split[i].2, split[i].1));
                i += 1;
            }
            points.push((ch.b as usize, ch.len + 1));
            let loop_once = ch.a == ch.b && points.len() == 3;
            for (j, pair) in points.windows(2).enumerate() {
                let ((s, si), (t, ti)) = (pair[0], pair[1]);
                let subdivide = if exact {
                    ti - si > 1
                } else {
                    loop_once && j == 1
                };
                if subdivide {
                    let m = fresh();
                    self.edges.extend([(s, m), (m, t)]);
                } else {
                    self.edges.push((s, t));
                }
            }
        }
        if direct && exact {
            self.edges.push((vx, vy));
        } else {
            let w = fresh();
            self.edges.extend([(vx, w), (w, vy)]);
        }

        if class == GraphClass::Planar && 2 * self.edges.len() >= self.base_n {
            // isolated kernel vertices cost the planarity test next to nothing
            return (tester.contains_edges(class, n, &self.edges), n);
        }

        // relabel the touched vertices from zero
        self.stamp_id = self.stamp_id.wrapping_add(1);
        if self.stamp_id == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.stamp_id = 1;
        }
        let id = self.stamp_id;
        let mut order = 0usize;
        for e in self.edges.iter_mut() {
            for v in [&mut e.0, &mut e.1] {
                if self.stamp[*v] != id {
                    self.stamp[*v] = id;
                    self.local[*v] = order as u32;
                    order += 1;
                }
                *v = self.local[*v] as usize;
            }
        }
        (tester.contains_edges(class, order, &self.edges), order)
    }
}
