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

//! Simple undirected graphs, union-find component tracking and the
//! structural functionals used throughout: excess, 2-core, pendant trees,
//! largest component.
//!
//! Vertices are `0..n` in memory. The text edge-list format is 1-based.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::GraphError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.push_edge_unchecked(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            let _ = g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.push_edge_unchecked(i - 1, i);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.push_edge_unchecked(u, v);
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges in insertion order, each stored as `(min, max)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].contains(&b)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.push_edge_unchecked(u, v);
        Ok(())
    }

    /// Caller guarantees `u != v`, both in range, and the edge is new.
    pub(crate) fn push_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.edges.push((u.min(v), u.max(v)));
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Graph without the edge `(u, v)`; vertex set unchanged.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let key = (u.min(v), u.max(v));
        let mut g = Graph::new(self.n());
        for &e in &self.edges {
            if e != key {
                g.push_edge_unchecked(e.0, e.1);
            }
        }
        g
    }

    /// Contract `(u, v)` into `min(u, v)` and drop the other endpoint; loops
    /// and parallel edges are discarded. Labels above the dropped vertex shift
    /// down by one.
    pub fn contract_edge(&self, u: usize, v: usize) -> Graph {
        let (keep, drop) = (u.min(v), u.max(v));
        let relabel = |x: usize| -> usize {
            let x = if x == drop { keep } else { x };
            if x > drop {
                x - 1
            } else {
                x
            }
        };
        let mut g = Graph::new(self.n() - 1);
        for &(a, b) in &self.edges {
            let (a, b) = (relabel(a), relabel(b));
            if a != b && !g.has_edge(a, b) {
                g.push_edge_unchecked(a, b);
            }
        }
        g
    }

    /// Relabel vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n());
        for &(a, b) in &self.edges {
            g.push_edge_unchecked(perm[a], perm[b]);
        }
        g
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    g.push_edge_unchecked(i, j);
                }
            }
        }
        g
    }

    /// Component label per vertex (labels are dense, in order of smallest
    /// member) and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Vertices of the component containing `s`, in BFS order.
    pub fn component_of(&self, s: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![s];
        seen[s] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().1 == 1
    }

    /// Write the `n m` header followed by 1-based `u v` lines.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.n(), self.m())?;
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, GraphError> {
        let mut lines = input
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));
        let parse_err = |line: usize, reason: &str| GraphError::Parse {
            line: line + 1,
            reason: reason.to_string(),
        };
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
        let header = header.map_err(|e| parse_err(hl, &e.to_string()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| parse_err(hl, &e.to_string()))?;
        if nums.len() != 2 {
            return Err(parse_err(hl, "header must be `n m`"));
        }
        let (n, m) = (nums[0], nums[1]);
        let mut g = Graph::new(n);
        for (ln, line) in lines {
            let line = line.map_err(|e| parse_err(ln, &e.to_string()))?;
            let pair: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| parse_err(ln, &e.to_string()))?;
            if pair.len() != 2 || pair[0] == 0 || pair[1] == 0 {
                return Err(parse_err(ln, "expected two 1-based vertex labels"));
            }
            g.add_edge(pair[0] - 1, pair[1] - 1)?;
        }
        if g.m() != m {
            return Err(parse_err(hl, "edge count does not match header"));
        }
        Ok(g)
    }
}

/// What adding an edge did to the component partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeEffect {
    /// The endpoints were in different components, now merged.
    Merged,
    /// Both endpoints already shared a component.
    Internal,
}

/// Union-find over vertices with per-component vertex and edge counts.
#[derive(Debug, Clone)]
pub struct ComponentTracker {
    parent: Vec<usize>,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    components: usize,
}

impl ComponentTracker {
    pub fn new(n: usize) -> Self {
        ComponentTracker {
            parent: (0..n).collect(),
            vertices: vec![1; n],
            edges: vec![0; n],
            components: n,
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut t = ComponentTracker::new(g.n());
        for &(u, v) in g.edges() {
            t.record_edge(u, v);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Root lookup with path halving.
    #[inline]
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let gp = self.parent[self.parent[x]];
            self.parent[x] = gp;
            x = gp;
        }
        x
    }

    /// Root lookup without mutation.
    #[inline]
    pub fn root(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.root(u) == self.root(v)
    }

    /// Vertex count of the component containing `x`.
    pub fn component_vertices(&self, x: usize) -> usize {
        self.vertices[self.root(x)]
    }

    /// Edge count of the component containing `x`.
    pub fn component_edges(&self, x: usize) -> usize {
        self.edges[self.root(x)]
    }

    pub fn is_tree_component(&self, x: usize) -> bool {
        let r = self.root(x);
        self.edges[r] + 1 == self.vertices[r]
    }

    pub fn record_edge(&mut self, u: usize, v: usize) -> EdgeEffect {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            self.edges[ru] += 1;
            return EdgeEffect::Internal;
        }
        let (big, small) = if self.vertices[ru] >= self.vertices[rv] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.parent[small] = big;
        self.vertices[big] += self.vertices[small];
        self.edges[big] += self.edges[small] + 1;
        self.components -= 1;
        EdgeEffect::Merged
    }

    /// Roots of all components.
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(move |&x| self.parent[x] == x)
    }

    /// `(vertices, edges)` for every component.
    pub fn component_sizes(&self) -> Vec<(usize, usize)> {
        self.roots()
            .map(|r| (self.vertices[r], self.edges[r]))
            .collect()
    }

    /// Dense labels in order of smallest member, comparable with
    /// [`Graph::components`].
    pub fn canonical_labels(&self) -> Vec<usize> {
        let n = self.n();
        let mut by_root = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut next = 0;
        for (v, label) in labels.iter_mut().enumerate() {
            let r = self.root(v);
            if by_root[r] == usize::MAX {
                by_root[r] = next;
                next += 1;
            }
            *label = by_root[r];
        }
        labels
    }

    pub fn excess(&self) -> usize {
        self.roots()
            .map(|r| self.edges[r].saturating_sub(self.vertices[r]))
            .sum()
    }
}

/// `m - v + (number of tree components)`, i.e. the sum of `m_i - v_i` over
/// the components that are not trees.
pub fn excess(g: &Graph) -> usize {
    let (label, count) = g.components();
    let mut verts = vec![0usize; count];
    let mut edges = vec![0usize; count];
    for &l in &label {
        verts[l] += 1;
    }
    for &(u, _) in g.edges() {
        edges[label[u]] += 1;
    }
    verts
        .iter()
        .zip(&edges)
        .map(|(&v, &e)| e.saturating_sub(v))
        .sum()
}

/// Membership mask of the 2-core, by repeatedly peeling vertices of
/// degree at most one.
pub fn two_core_mask(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    queue.push(w);
                }
            }
        }
    }
    alive
}

/// Maximal subgraph of minimum degree two, on the same vertex set (vertices
/// outside the core end up isolated).
pub fn two_core(g: &Graph) -> Graph {
    let alive = two_core_mask(g);
    let mut core = Graph::new(g.n());
    for &(u, v) in g.edges() {
        if alive[u] && alive[v] {
            core.push_edge_unchecked(u, v);
        }
    }
    core
}

/// The 2-core of a connected, non-tree graph together with the pendant tree
/// hanging off each core vertex.
#[derive(Debug, Clone)]
pub struct PendantForest {
    pub core: Graph,
    pub in_core: Vec<bool>,
    /// Core vertex whose pendant tree contains each vertex.
    pub tree_of: Vec<usize>,
}

impl PendantForest {
    /// `|V(T_x)|` for core vertex `x`, zero for non-core vertices.
    pub fn weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.tree_of.len()];
        for &x in &self.tree_of {
            w[x] += 1;
        }
        w
    }

    pub fn tree(&self, x: usize) -> Vec<usize> {
        (0..self.tree_of.len())
            .filter(|&v| self.tree_of[v] == x)
            .collect()
    }
}

pub fn pendant_tree_decomposition(g: &Graph) -> Result<PendantForest, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let in_core = two_core_mask(g);
    if !in_core.iter().any(|&c| c) {
        return Err(GraphError::IsTree);
    }
    let mut core = Graph::new(g.n());
    for &(u, v) in g.edges() {
        if in_core[u] && in_core[v] {
            core.push_edge_unchecked(u, v);
        }
    }
    // multi-source BFS out of the core along non-core edges
    let mut tree_of = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for v in 0..g.n() {
        if in_core[v] {
            tree_of[v] = v;
            queue.push_back(v);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if !in_core[y] && tree_of[y] == usize::MAX {
                tree_of[y] = tree_of[x];
                queue.push_back(y);
            }
        }
    }
    Ok(PendantForest {
        core,
        in_core,
        tree_of,
    })
}

/// Largest component as a sorted vertex list; ties go to the component with
/// the smallest vertex.
pub fn largest_component(g: &Graph) -> (Vec<usize>, usize) {
    if g.n() == 0 {
        return (Vec::new(), 0);
    }
    let (label, count) = g.components();
    let mut sizes = vec![0usize; count];
    for &l in &label {
        sizes[l] += 1;
    }
    // labels are numbered by smallest member, so the first maximum wins ties
    let mut best = 0;
    for l in 1..count {
        if sizes[l] > sizes[best] {
            best = l;
        }
    }
    let verts: Vec<usize> = (0..g.n()).filter(|&v| label[v] == best).collect();
    let size = verts.len();
    (verts, size)
}

pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_with_tail() -> Graph {
        // triangle 0,1,2 with path 2-3-4-5
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn add_edge_updates_tracker() {
        let mut g = Graph::new(3);
        let mut t = ComponentTracker::new(3);
        g.add_edge(0, 1).unwrap();
        assert_eq!(t.record_edge(0, 1), EdgeEffect::Merged);
        assert_eq!(t.component_edges(0), 1);
        g.add_edge(1, 2).unwrap();
        t.record_edge(1, 2);
        g.add_edge(0, 2).unwrap();
        assert_eq!(t.record_edge(0, 2), EdgeEffect::Internal);
        assert_eq!(t.component_edges(2), 3);
        assert_eq!(t.component_vertices(2), 3);
        assert_eq!(t.component_count(), 1);
    }

    #[test]
    fn add_edge_errors() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(
            g.add_edge(0, 3),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn excess_examples() {
        assert_eq!(excess(&Graph::path(7)), 0);
        let tri = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(excess(&tri), 0);
        assert_eq!(excess(&Graph::complete(4)), 2);
        // two disjoint triangles joined by a bridge
        let mut g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(excess(&g), 0);
        g.add_edge(2, 3).unwrap();
        assert_eq!(excess(&g), 1);
        assert_eq!(ComponentTracker::from_graph(&g).excess(), 1);
    }

    #[test]
    fn two_core_examples() {
        assert_eq!(two_core(&Graph::path(5)).m(), 0);
        let c5 = Graph::cycle(5);
        assert_eq!(two_core(&c5).m(), 5);
        let core = two_core(&triangle_with_tail());
        assert_eq!(core.edges(), &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(two_core(&core), core);
    }

    #[test]
    fn pendant_trees() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let pf = pendant_tree_decomposition(&g).unwrap();
        assert_eq!(pf.weights(), vec![1, 1, 2, 0]);
        assert_eq!(pf.tree(2), vec![2, 3]);
        let c5 = pendant_tree_decomposition(&Graph::cycle(5)).unwrap();
        assert!(c5.weights().iter().all(|&w| w == 1));
        assert_eq!(
            pendant_tree_decomposition(&Graph::path(4)).unwrap_err(),
            GraphError::IsTree
        );
        let disconnected = Graph::new(2);
        assert_eq!(
            pendant_tree_decomposition(&disconnected).unwrap_err(),
            GraphError::Disconnected
        );
    }

    #[test]
    fn largest_component_ties_and_degree() {
        assert_eq!(largest_component(&Graph::new(5)).1, 1);
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(largest_component(&g).0, vec![0, 1, 2]);
        let star = Graph::complete_bipartite(1, 7);
        assert_eq!(max_degree(&star), 7);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = triangle_with_tail();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("6 6\n1 2\n"));
        let back = Graph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back, g);
        assert!(Graph::read_edge_list(&b"3 1\n1 1\n"[..]).is_err());
        assert!(Graph::read_edge_list(&b"3 2\n1 2\n"[..]).is_err());
        assert!(Graph::read_edge_list(&b"3 1\n0 2\n"[..]).is_err());
    }

    #[test]
    fn contraction_drops_loops_and_parallels() {
        let g = Graph::cycle(3).contract_edge(0, 1);
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
    }
}
