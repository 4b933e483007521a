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

//! Planarity testing with the left-right criterion.
//!
//! Two passes over a DFS: the first orients every edge and computes
//! lowpoints and nesting depths, the second replays the DFS in nesting
//! order while maintaining a stack of conflict pairs of return-edge
//! intervals. Both passes are iterative so deep DFS trees cannot overflow
//! the call stack. Only the yes/no answer is produced, no embedding.

use crate::graph::Graph;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Interval {
    low: u32,
    high: u32,
}

impl Interval {
    const EMPTY: Interval = Interval {
        low: NONE,
        high: NONE,
    };

    #[inline]
    fn is_empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }
}

#[derive(Debug, Clone, Copy)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    #[inline]
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

#[derive(Debug, Clone, Copy)]
struct EdgeState {
    src: u32,
    dst: u32,
    lowpt: u32,
    lowpt2: u32,
    nesting: u32,
    lowpt_edge: u32,
    reference: u32,
    stack_bottom: u32,
}

impl EdgeState {
    /// Not yet oriented (`src == NONE`).
    const FRESH: EdgeState = EdgeState {
        src: NONE,
        dst: NONE,
        lowpt: NONE,
        lowpt2: NONE,
        nesting: NONE,
        lowpt_edge: NONE,
        reference: NONE,
        stack_bottom: NONE,
    };
}

#[derive(Debug, Clone, Copy)]
struct VertexState {
    height: u32,
    parent_edge: u32,
}

/// Reusable buffers; one per worker.
#[derive(Debug, Default)]
pub struct PlanarityTester {
    adj_start: Vec<u32>,
    adj_list: Vec<(u32, u32)>,
    ed: Vec<EdgeState>,
    vx: Vec<VertexState>,
    out_list: Vec<u32>,
    out_end: Vec<u32>,
    frames: Vec<(u32, u32)>,
    conflicts: Vec<ConflictPair>,
}

impl PlanarityTester {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_planar(&mut self, g: &Graph) -> bool {
        self.test(g.n(), g.edges())
    }

    /// Planarity of the simple graph on `0..n` with the given edges.
    pub fn test(&mut self, n: usize, edges: &[(usize, usize)]) -> bool {
        let m = edges.len();
        if n > 2 && m > 3 * n - 6 {
            return false;
        }
        if m < 9 {
            // every non-planar graph has at least nine edges
            return true;
        }
        self.build(n, edges);
        self.orient(n);
        self.sort_by_nesting(n);
        self.run_tests(n)
    }

    fn build(&mut self, n: usize, edges: &[(usize, usize)]) {
        let m = edges.len();
        // degrees, then running sums, then fill each range from its end
        self.adj_start.clear();
        self.adj_start.resize(n + 1, 0);
        for &(u, v) in edges {
            self.adj_start[u] += 1;
            self.adj_start[v] += 1;
        }
        for i in 1..n {
            self.adj_start[i] += self.adj_start[i - 1];
        }
        self.adj_start[n] = 2 * m as u32;
        // every slot below 2 m is written before it is read
        if self.adj_list.len() < 2 * m {
            self.adj_list.resize(2 * m, (0, 0));
            self.out_list.resize(2 * m, 0);
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            self.adj_start[u] -= 1;
            self.adj_list[self.adj_start[u] as usize] = (v as u32, e as u32);
            self.adj_start[v] -= 1;
            self.adj_list[self.adj_start[v] as usize] = (u as u32, e as u32);
        }
        self.out_end.clear();
        self.out_end.extend_from_slice(&self.adj_start[..n]);
        self.ed.clear();
        self.ed.resize(m, EdgeState::FRESH);
        self.vx.clear();
        self.vx.resize(
            n,
            VertexState {
                height: NONE,
                parent_edge: NONE,
            },
        );
    }

    fn orient(&mut self, n: usize) {
        for root in 0..n {
            if self.vx[root].height != NONE {
                continue;
            }
            self.vx[root].height = 0;
            self.frames.clear();
            let mut v = root;
            let mut pos = self.adj_start[v];
            let mut end = self.adj_start[v + 1];
            let mut hv = 0;
            loop {
                if pos < end {
                    let (w, e) = self.adj_list[pos as usize];
                    pos += 1;
                    let (w, e) = (w as usize, e as usize);
                    let edge = &mut self.ed[e];
                    if edge.src != NONE {
                        continue;
                    }
                    edge.src = v as u32;
                    edge.dst = w as u32;
                    self.out_list[self.out_end[v] as usize] = e as u32;
                    self.out_end[v] += 1;
                    edge.lowpt = hv;
                    edge.lowpt2 = hv;
                    let target = &mut self.vx[w];
                    if target.height == NONE {
                        target.parent_edge = e as u32;
                        target.height = hv + 1;
                        self.frames.push((v as u32, pos));
                        v = w;
                        hv += 1;
                        pos = self.adj_start[v];
                        end = self.adj_start[v + 1];
                    } else {
                        edge.lowpt = target.height;
                        self.finish_orientation(e);
                    }
                } else {
                    let pe = self.vx[v].parent_edge;
                    if pe != NONE {
                        self.finish_orientation(pe as usize);
                    }
                    match self.frames.pop() {
                        Some((u, p)) => {
                            v = u as usize;
                            pos = p;
                            end = self.adj_start[v + 1];
                            hv -= 1;
                        }
                        None => break,
                    }
                }
            }
        }
    }

    /// Nesting depth of `e` and lowpoint propagation into the parent edge of
    /// its source.
    fn finish_orientation(&mut self, e: usize) {
        let edge = self.ed[e];
        let v = self.vx[edge.src as usize];
        let mut depth = 2 * edge.lowpt;
        if edge.lowpt2 < v.height {
            depth += 1;
        }
        self.ed[e].nesting = depth;
        if v.parent_edge == NONE {
            return;
        }
        let parent = &mut self.ed[v.parent_edge as usize];
        if edge.lowpt < parent.lowpt {
            parent.lowpt2 = parent.lowpt.min(edge.lowpt2);
            parent.lowpt = edge.lowpt;
        } else if edge.lowpt > parent.lowpt {
            parent.lowpt2 = parent.lowpt2.min(edge.lowpt);
        } else {
            parent.lowpt2 = parent.lowpt2.min(edge.lowpt2);
        }
    }

    /// Sort the outgoing edges of each vertex, recorded during orientation,
    /// by nesting depth (ties by edge index).
    fn sort_by_nesting(&mut self, n: usize) {
        for v in 0..n {
            let (a, k) = (self.adj_start[v] as usize, self.out_end[v] as usize);
            let ed = &self.ed;
            let key = |e: u32| (ed[e as usize].nesting, e);
            match k - a {
                0 | 1 => {}
                2 => {
                    if key(self.out_list[a]) > key(self.out_list[a + 1]) {
                        self.out_list.swap(a, a + 1);
                    }
                }
                _ => self.out_list[a..k].sort_unstable_by_key(|&e| key(e)),
            }
        }
    }

    fn run_tests(&mut self, n: usize) -> bool {
        self.conflicts.clear();
        for root in 0..n {
            if self.vx[root].height != 0 {
                continue;
            }
            self.frames.clear();
            let mut v = root;
            let mut pos = self.adj_start[v];
            let mut end = self.out_end[v];
            loop {
                if pos < end {
                    let ei = self.out_list[pos as usize] as usize;
                    pos += 1;
                    let w = self.ed[ei].dst as usize;
                    self.ed[ei].stack_bottom = self.conflicts.len() as u32;
                    if self.vx[w].parent_edge == ei as u32 {
                        self.frames.push((v as u32, pos));
                        v = w;
                        pos = self.adj_start[v];
                        end = self.out_end[v];
                        continue;
                    }
                    self.ed[ei].lowpt_edge = ei as u32;
                    self.conflicts.push(ConflictPair {
                        left: Interval::EMPTY,
                        right: Interval {
                            low: ei as u32,
                            high: ei as u32,
                        },
                    });
                    if !self.integrate(v, ei) {
                        return false;
                    }
                } else {
                    let e = self.vx[v].parent_edge;
                    if e != NONE {
                        let e = e as usize;
                        self.remove_back_edges(e);
                        let u = self.ed[e].src as usize;
                        if !self.integrate(u, e) {
                            return false;
                        }
                    }
                    match self.frames.pop() {
                        Some((u, p)) => {
                            v = u as usize;
                            pos = p;
                            end = self.out_end[v];
                        }
                        None => break,
                    }
                }
            }
        }
        true
    }

    /// Fold the return edges of `ei`, an outgoing edge of `v`, into the
    /// constraints of the parent edge of `v`.
    fn integrate(&mut self, v: usize, ei: usize) -> bool {
        let vs = self.vx[v];
        if self.ed[ei].lowpt >= vs.height {
            return true;
        }
        let e = vs.parent_edge as usize;
        if self.out_list[self.adj_start[v] as usize] as usize == ei {
            self.ed[e].lowpt_edge = self.ed[ei].lowpt_edge;
            true
        } else {
            self.add_constraints(ei, e)
        }
    }

    #[inline]
    fn lowpt(&self, e: u32) -> u32 {
        self.ed[e as usize].lowpt
    }

    #[inline]
    fn conflicting(&self, iv: Interval, b: usize) -> bool {
        !iv.is_empty() && self.lowpt(iv.high) > self.ed[b].lowpt
    }

    #[inline]
    fn lowest(&self, p: &ConflictPair) -> u32 {
        if p.left.is_empty() {
            return self.lowpt(p.right.low);
        }
        if p.right.is_empty() {
            return self.lowpt(p.left.low);
        }
        self.lowpt(p.left.low).min(self.lowpt(p.right.low))
    }

    #[inline]
    fn set_ref(&mut self, e: u32, to: u32) {
        if e != NONE {
            self.ed[e as usize].reference = to;
        }
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair {
            left: Interval::EMPTY,
            right: Interval::EMPTY,
        };
        let e_lowpt = self.ed[e].lowpt;
        let bottom = self.ed[ei].stack_bottom;
        // merge the return edges of ei into p.right
        loop {
            let mut q = match self.conflicts.pop() {
                Some(q) => q,
                None => break,
            };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            if self.lowpt(q.right.low) > e_lowpt {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.set_ref(p.right.low, q.right.high);
                }
                p.right.low = q.right.low;
            } else {
                let to = self.ed[e].lowpt_edge;
                self.set_ref(q.right.low, to);
            }
            if self.conflicts.len() as u32 == bottom {
                break;
            }
        }
        // merge conflicting return edges of earlier siblings into p.left
        while let Some(&top) = self.conflicts.last() {
            if !(self.conflicting(top.left, ei) || self.conflicting(top.right, ei)) {
                break;
            }
            let mut q = self.conflicts.pop().unwrap();
            if self.conflicting(q.right, ei) {
                q.swap();
            }
            if self.conflicting(q.right, ei) {
                return false;
            }
            self.set_ref(p.right.low, q.right.high);
            if q.right.low != NONE {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else {
                self.set_ref(p.left.low, q.left.high);
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.conflicts.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.ed[e].src;
        let hu = self.vx[u as usize].height;
        while let Some(top) = self.conflicts.last() {
            if self.lowest(top) == hu {
                self.conflicts.pop();
            } else {
                break;
            }
        }
        if let Some(mut p) = self.conflicts.pop() {
            while p.left.high != NONE && self.ed[p.left.high as usize].dst == u {
                p.left.high = self.ed[p.left.high as usize].reference;
            }
            if p.left.high == NONE && p.left.low != NONE {
                self.ed[p.left.low as usize].reference = p.right.low;
                p.left.low = NONE;
            }
            while p.right.high != NONE && self.ed[p.right.high as usize].dst == u {
                p.right.high = self.ed[p.right.high as usize].reference;
            }
            if p.right.high == NONE && p.right.low != NONE {
                self.ed[p.right.low as usize].reference = p.left.low;
                p.right.low = NONE;
            }
            self.conflicts.push(p);
        }
        if self.ed[e].lowpt < hu {
            if let Some(top) = self.conflicts.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.ed[e].reference = if hl != NONE && (hr == NONE || self.lowpt(hl) > self.lowpt(hr)) {
                    hl
                } else {
                    hr
                };
            }
        }
    }
}

pub fn is_planar(g: &Graph) -> bool {
    PlanarityTester::new().is_planar(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(!is_planar(&Graph::complete(5)));
        assert!(!is_planar(&Graph::complete_bipartite(3, 3)));
        assert!(is_planar(&Graph::complete(4)));
        assert!(is_planar(&Graph::complete_bipartite(2, 7)));
        assert!(!is_planar(&petersen()));
    }

    #[test]
    fn k5_minus_edge_is_planar() {
        assert!(is_planar(&Graph::complete(5).without_edge(0, 1)));
    }

    #[test]
    fn grid_and_subdivided_k33() {
        let mut g = Graph::new(25);
        for r in 0..5 {
            for c in 0..5 {
                let v = r * 5 + c;
                if c < 4 {
                    g.add_edge(v, v + 1).unwrap();
                }
                if r < 4 {
                    g.add_edge(v, v + 5).unwrap();
                }
            }
        }
        assert!(is_planar(&g));
        // K3,3 with every edge subdivided, plus a disjoint triangle
        let mut h = Graph::new(6 + 9 + 3);
        let mut next = 6;
        for a in 0..3 {
            for b in 3..6 {
                h.add_edge(a, next).unwrap();
                h.add_edge(next, b).unwrap();
                next += 1;
            }
        }
        h.add_edge(15, 16).unwrap();
        h.add_edge(16, 17).unwrap();
        h.add_edge(15, 17).unwrap();
        assert!(!is_planar(&h));
    }

    #[test]
    fn long_cycle_does_not_overflow() {
        let mut g = Graph::cycle(200_000);
        g.add_edge(0, 100_000).unwrap();
        g.add_edge(50_000, 150_000).unwrap();
        assert!(is_planar(&g));
        g.add_edge(25_000, 125_000).unwrap();
        // three mutually crossing chords of a cycle form a K3,3 subdivision
        assert!(!is_planar(&g));
    }
}
