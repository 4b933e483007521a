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

//! Membership tests for the supported minor-closed classes and the oracle
//! contract deciding whether `G + uv` stays in a class.

pub mod axioms;
pub mod blocks;
pub mod minor;
pub mod planarity;
pub mod series_parallel;

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use crate::error::GraphError;
use crate::graph::{two_core_mask, ComponentTracker, Graph};

pub use blocks::{blocks, edge_blocks, is_cactus, CactusTester};
pub use minor::{diamond, has_minor, MinorChecker};
pub use planarity::{is_planar, PlanarityTester};
pub use series_parallel::{is_series_parallel, SeriesParallelTester};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphClass {
    Cactus,
    Outerplanar,
    SeriesParallel,
    Planar,
    Unconstrained,
}

impl GraphClass {
    pub const CONSTRAINED: [GraphClass; 4] = [
        GraphClass::Cactus,
        GraphClass::Outerplanar,
        GraphClass::SeriesParallel,
        GraphClass::Planar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Cactus => "cactus",
            GraphClass::Outerplanar => "outerplanar",
            GraphClass::SeriesParallel => "series-parallel",
            GraphClass::Planar => "planar",
            GraphClass::Unconstrained => "none",
        }
    }

    /// Smallest `m - v` over the 2-edge-connected forbidden minors. A
    /// connected graph with `m - v` below this cannot contain a subdivision
    /// of any of them.
    pub fn excess_threshold(self) -> usize {
        match self {
            GraphClass::Cactus | GraphClass::Outerplanar => 1,
            GraphClass::SeriesParallel => 2,
            GraphClass::Planar => 3,
            GraphClass::Unconstrained => usize::MAX,
        }
    }

    pub fn forbidden_minors(self) -> Vec<Graph> {
        match self {
            GraphClass::Cactus => vec![diamond()],
            GraphClass::Outerplanar => vec![Graph::complete(4), Graph::complete_bipartite(2, 3)],
            GraphClass::SeriesParallel => vec![Graph::complete(4)],
            GraphClass::Planar => vec![Graph::complete(5), Graph::complete_bipartite(3, 3)],
            GraphClass::Unconstrained => Vec::new(),
        }
    }

    /// Most edges a member on `n` vertices can have.
    pub fn max_edges(self, n: usize) -> u64 {
        let n64 = n as u64;
        let all = n64 * n64.saturating_sub(1) / 2;
        match self {
            GraphClass::Planar if n >= 3 => 3 * n64 - 6,
            GraphClass::Outerplanar | GraphClass::SeriesParallel if n >= 2 => 2 * n64 - 3,
            GraphClass::Cactus => 3 * n64.saturating_sub(1) / 2,
            _ => all,
        }
    }

    pub fn contains(self, g: &Graph) -> bool {
        ClassTester::new().contains(self, g)
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cactus" => Ok(GraphClass::Cactus),
            "outerplanar" => Ok(GraphClass::Outerplanar),
            "series-parallel" | "series_parallel" | "sp" => Ok(GraphClass::SeriesParallel),
            "planar" => Ok(GraphClass::Planar),
            "none" | "unconstrained" => Ok(GraphClass::Unconstrained),
            other => Err(format!(
                "unknown class `{other}` (expected cactus, outerplanar, series-parallel, planar or none)"
            )),
        }
    }
}

/// Class membership with reusable scratch space.
#[derive(Debug, Default)]
pub struct ClassTester {
    planarity: PlanarityTester,
    series_parallel: SeriesParallelTester,
    cactus: CactusTester,
    apex_edges: Vec<(usize, usize)>,
}

impl ClassTester {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&mut self, class: GraphClass, g: &Graph) -> bool {
        match class {
            GraphClass::Unconstrained => true,
            GraphClass::Planar => self.planarity.is_planar(g),
            GraphClass::SeriesParallel => self.series_parallel.test(g.n(), g.edges()),
            GraphClass::Cactus => self.cactus.test(g.n(), g.edges()),
            GraphClass::Outerplanar => self.is_outerplanar(g),
        }
    }

    /// Membership of the simple graph on `0..n` with the given edges.
    pub fn contains_edges(&mut self, class: GraphClass, n: usize, edges: &[(usize, usize)]) -> bool {
        match class {
            GraphClass::Unconstrained => true,
            GraphClass::Planar => self.planarity.test(n, edges),
            GraphClass::Outerplanar => self.outerplanar_edges(n, edges),
            GraphClass::SeriesParallel => self.series_parallel.test(n, edges),
            GraphClass::Cactus => self.cactus.test(n, edges),
        }
    }

    fn is_outerplanar(&mut self, g: &Graph) -> bool {
        self.outerplanar_edges(g.n(), g.edges())
    }

    /// Outerplanar iff planar after adding a vertex adjacent to everything.
    fn outerplanar_edges(&mut self, n: usize, edges: &[(usize, usize)]) -> bool {
        if n >= 2 && edges.len() > 2 * n - 3 {
            return false;
        }
        self.apex_edges.clear();
        self.apex_edges.extend_from_slice(edges);
        self.apex_edges.extend((0..n).map(|v| (v, n)));
        let edges = std::mem::take(&mut self.apex_edges);
        let planar = self.planarity.test(n + 1, &edges);
        self.apex_edges = edges;
        planar
    }
}

/// Deciding whether an edge may be added to a member of a class.
pub trait ConstraintOracle: Send + Sync {
    fn name(&self) -> String;

    /// Membership of the whole graph.
    fn contains(&self, g: &Graph) -> bool;

    /// Whether `g + uv` is still in the class, for `g` in the class and
    /// `tracker` describing the components of `g`.
    fn allows(
        &self,
        g: &Graph,
        tracker: &ComponentTracker,
        u: usize,
        v: usize,
    ) -> Result<bool, GraphError>;

    /// Classes with no forbidden minor accept everything.
    fn is_trivial(&self) -> bool {
        false
    }

    /// The built-in class this oracle decides, if it may be replaced by the
    /// incremental engine.
    fn builtin_class(&self) -> Option<GraphClass> {
        None
    }
}

/// Rejects loops, out-of-range vertices and existing edges.
pub fn check_query(g: &Graph, u: usize, v: usize) -> Result<(), GraphError> {
    for x in [u, v] {
        if x >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: x, n: g.n() });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    if g.has_edge(u, v) {
        return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
    }
    Ok(())
}

/// The components of `u` and `v` plus the edge `uv`, relabelled from zero.
fn merged_component(g: &Graph, u: usize, v: usize, same: bool) -> Graph {
    let mut verts = g.component_of(u);
    if !same {
        verts.extend(g.component_of(v));
    }
    let lu = verts.iter().position(|&x| x == u).unwrap();
    let lv = verts.iter().position(|&x| x == v).unwrap();
    let mut h = g.induced(&verts);
    h.push_edge_unchecked(lu, lv);
    h
}

/// Oracle for one of the built-in classes.
///
/// With shortcuts on, queries across components, queries inside tree
/// components and queries whose component would stay below the class'
/// excess threshold are accepted outright; otherwise the class test runs on
/// the 2-core of the merged component. With shortcuts off the class test
/// always runs on the whole merged component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassOracle {
    pub class: GraphClass,
    pub shortcuts: bool,
}

impl ClassOracle {
    pub fn new(class: GraphClass) -> Self {
        ClassOracle {
            class,
            shortcuts: true,
        }
    }

    pub fn naive(class: GraphClass) -> Self {
        ClassOracle {
            class,
            shortcuts: false,
        }
    }

    pub fn excess_threshold(&self) -> usize {
        self.class.excess_threshold()
    }
}

impl ConstraintOracle for ClassOracle {
    fn name(&self) -> String {
        self.class.name().to_string()
    }

    fn contains(&self, g: &Graph) -> bool {
        self.class.contains(g)
    }

    fn is_trivial(&self) -> bool {
        self.class == GraphClass::Unconstrained
    }

    fn builtin_class(&self) -> Option<GraphClass> {
        self.shortcuts.then_some(self.class)
    }

    fn allows(
        &self,
        g: &Graph,
        tracker: &ComponentTracker,
        u: usize,
        v: usize,
    ) -> Result<bool, GraphError> {
        check_query(g, u, v)?;
        if self.class == GraphClass::Unconstrained {
            return Ok(true);
        }
        let same = tracker.same_component(u, v);
        if !self.shortcuts {
            return Ok(self.class.contains(&merged_component(g, u, v, same)));
        }
        if !same || tracker.is_tree_component(u) {
            return Ok(true);
        }
        let after = tracker.component_edges(u) + 1;
        if after < tracker.component_vertices(u) + self.excess_threshold() {
            return Ok(true);
        }
        let h = merged_component(g, u, v, true);
        let core: Vec<usize> = two_core_mask(&h)
            .iter()
            .enumerate()
            .filter_map(|(x, &c)| c.then_some(x))
            .collect();
        Ok(self.class.contains(&h.induced(&core)))
    }
}

/// Membership decided by brute-force minor search against the class'
/// forbidden minors. Only usable on graphs with at most ten vertices.
#[derive(Debug)]
pub struct MinorOracle {
    pub class: GraphClass,
    checkers: Mutex<Vec<MinorChecker>>,
}

impl MinorOracle {
    pub fn new(class: GraphClass) -> Self {
        let checkers = class
            .forbidden_minors()
            .iter()
            .map(|h| MinorChecker::new(h).expect("forbidden minors are small"))
            .collect();
        MinorOracle {
            class,
            checkers: Mutex::new(checkers),
        }
    }

    pub fn try_contains(&self, g: &Graph) -> Result<bool, GraphError> {
        let mut checkers = self.checkers.lock().unwrap();
        for c in checkers.iter_mut() {
            if c.contained_in(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl ConstraintOracle for MinorOracle {
    fn name(&self) -> String {
        format!("{}-minor", self.class.name())
    }

    fn contains(&self, g: &Graph) -> bool {
        self.try_contains(g).expect("graph too large for the minor oracle")
    }

    fn is_trivial(&self) -> bool {
        self.class == GraphClass::Unconstrained
    }

    fn allows(
        &self,
        g: &Graph,
        _tracker: &ComponentTracker,
        u: usize,
        v: usize,
    ) -> Result<bool, GraphError> {
        check_query(g, u, v)?;
        let mut h = g.clone();
        h.push_edge_unchecked(u, v);
        self.try_contains(&h)
    }
}

/// All labelled graphs on `n` vertices (`2^(n(n-1)/2)` of them).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let mut g = Graph::new(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                g.push_edge_unchecked(u, v);
            }
        }
        g
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn allows(class: GraphClass, g: &Graph, u: usize, v: usize) -> bool {
        let t = ComponentTracker::from_graph(g);
        let fast = ClassOracle::new(class).allows(g, &t, u, v).unwrap();
        let slow = ClassOracle::naive(class).allows(g, &t, u, v).unwrap();
        assert_eq!(fast, slow);
        fast
    }

    #[test]
    fn planar_rejects_completing_k5() {
        let g = Graph::complete(5).without_edge(0, 1);
        assert!(!allows(GraphClass::Planar, &g, 0, 1));
    }

    #[test]
    fn cross_component_always_accepted() {
        let mut g = Graph::complete(5).without_edge(0, 1);
        g.add_vertex();
        for class in GraphClass::CONSTRAINED {
            let t = ComponentTracker::from_graph(&g);
            assert!(ClassOracle::new(class).allows(&g, &t, 2, 5).unwrap());
        }
    }

    #[test]
    fn cactus_rejects_diamond() {
        assert!(!allows(GraphClass::Cactus, &Graph::cycle(4), 0, 2));
    }

    #[test]
    fn series_parallel_rejects_k4() {
        let g = Graph::complete(4).without_edge(0, 1);
        assert!(!allows(GraphClass::SeriesParallel, &g, 0, 1));
        assert!(allows(GraphClass::Outerplanar, &Graph::cycle(5), 0, 2));
    }

    #[test]
    fn outerplanar_rejects_k23() {
        let g = Graph::complete_bipartite(2, 3).without_edge(0, 2);
        assert!(!allows(GraphClass::Outerplanar, &g, 0, 2));
        assert!(allows(GraphClass::SeriesParallel, &g, 0, 2));
    }

    #[test]
    fn query_errors() {
        let g = Graph::path(3);
        let t = ComponentTracker::from_graph(&g);
        let o = ClassOracle::new(GraphClass::Planar);
        assert!(matches!(o.allows(&g, &t, 0, 1), Err(GraphError::DuplicateEdge(0, 1))));
        assert!(matches!(o.allows(&g, &t, 2, 2), Err(GraphError::SelfLoop(2))));
    }

    #[test]
    fn class_names_parse() {
        for class in [
            GraphClass::Cactus,
            GraphClass::Outerplanar,
            GraphClass::SeriesParallel,
            GraphClass::Planar,
            GraphClass::Unconstrained,
        ] {
            assert_eq!(class.name().parse::<GraphClass>().unwrap(), class);
        }
        assert!("toroidal".parse::<GraphClass>().is_err());
    }

    #[test]
    fn edge_caps() {
        assert_eq!(GraphClass::Planar.max_edges(6), 12);
        assert_eq!(GraphClass::Outerplanar.max_edges(6), 9);
        assert_eq!(GraphClass::Cactus.max_edges(7), 9);
        assert_eq!(GraphClass::Planar.max_edges(2), 1);
        assert_eq!(GraphClass::Unconstrained.max_edges(5), 10);
    }
}
