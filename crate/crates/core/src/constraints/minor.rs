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

//! Brute-force minor containment for graphs on at most ten vertices.
//!
//! `H` is a minor of `G` iff `H` is a subgraph of some graph reachable from
//! `G` by vertex deletions and edge contractions with exactly `v(H)`
//! vertices left. The search memoises on a degree-sorted relabelling of the
//! adjacency matrix: the key always describes a graph isomorphic to the one
//! it was computed from, so a cache hit is never wrong, merely not
//! guaranteed for every isomorphic copy.

use std::collections::HashMap;

use crate::error::GraphError;
use crate::graph::Graph;

pub const MINOR_VERTEX_LIMIT: usize = 10;

/// Adjacency bitsets, one `u16` per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Small {
    rows: Vec<u16>,
}

impl Small {
    fn from_graph(g: &Graph) -> Self {
        let mut rows = vec![0u16; g.n()];
        for &(u, v) in g.edges() {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        Small { rows }
    }

    fn n(&self) -> usize {
        self.rows.len()
    }

    fn m(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    fn delete_vertex(&self, x: usize) -> Small {
        let rows = (0..self.n())
            .filter(|&v| v != x)
            .map(|v| squeeze(self.rows[v], x))
            .collect();
        Small { rows }
    }

    /// Merge `b` into `a` (`a < b`) and drop `b`.
    fn contract(&self, a: usize, b: usize) -> Small {
        let mut rows = self.rows.clone();
        let merged = (rows[a] | rows[b]) & !(1 << a) & !(1 << b);
        rows[a] = merged;
        for (v, row) in rows.iter_mut().enumerate() {
            if v != a && v != b && *row & (1 << b) != 0 {
                *row = (*row & !(1 << b)) | (1 << a);
            }
        }
        let rows = (0..rows.len())
            .filter(|&v| v != b)
            .map(|v| squeeze(rows[v], b))
            .collect();
        Small { rows }
    }

    /// Relabel by (degree, neighbour degrees) so that many isomorphic copies
    /// share a cache key.
    fn key(&self) -> u64 {
        let n = self.n();
        let deg: Vec<u32> = self.rows.iter().map(|r| r.count_ones()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        let nsum: Vec<u32> = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&w| self.rows[v] & (1 << w) != 0)
                    .map(|w| deg[w] * deg[w])
                    .sum()
            })
            .collect();
        order.sort_by_key(|&v| (deg[v], nsum[v], v));
        let mut bits = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.rows[order[i]] & (1 << order[j]) != 0 {
                    bits |= 1 << bit;
                }
                bit += 1;
            }
        }
        bits | ((n as u64) << 48)
    }
}

/// Remove bit `x` and shift the higher bits down.
fn squeeze(row: u16, x: usize) -> u16 {
    let low = row & ((1u16 << x) - 1);
    let high = (row >> (x + 1)) << x;
    low | high
}

/// Cached minor search against one fixed pattern graph.
#[derive(Debug, Clone)]
pub struct MinorChecker {
    pattern: Small,
    pattern_edges: Vec<(usize, usize)>,
    memo: HashMap<u64, bool>,
}

impl MinorChecker {
    pub fn new(pattern: &Graph) -> Result<Self, GraphError> {
        if pattern.n() > MINOR_VERTEX_LIMIT {
            return Err(GraphError::TooLarge {
                n: pattern.n(),
                limit: MINOR_VERTEX_LIMIT,
            });
        }
        Ok(MinorChecker {
            pattern: Small::from_graph(pattern),
            pattern_edges: pattern.edges().to_vec(),
            memo: HashMap::new(),
        })
    }

    pub fn contained_in(&mut self, g: &Graph) -> Result<bool, GraphError> {
        if g.n() > MINOR_VERTEX_LIMIT {
            return Err(GraphError::TooLarge {
                n: g.n(),
                limit: MINOR_VERTEX_LIMIT,
            });
        }
        Ok(self.search(&Small::from_graph(g)))
    }

    fn search(&mut self, g: &Small) -> bool {
        let (gn, hn) = (g.n(), self.pattern.n());
        if gn < hn || g.m() < self.pattern_edges.len() {
            return false;
        }
        let key = g.key();
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let found = if gn == hn {
            self.embeds(g)
        } else {
            let mut found = false;
            // an isolated vertex can only ever be deleted
            if let Some(x) = (0..gn).find(|&v| g.rows[v] == 0) {
                found = self.search(&g.delete_vertex(x));
            } else {
                'outer: for a in 0..gn {
                    for b in a + 1..gn {
                        if g.rows[a] & (1 << b) != 0 && self.search(&g.contract(a, b)) {
                            found = true;
                            break 'outer;
                        }
                    }
                }
                if !found {
                    found = (0..gn).any(|x| self.search(&g.delete_vertex(x)));
                }
            }
            found
        };
        self.memo.insert(key, found);
        found
    }

    /// Subgraph test for equal vertex counts: search for an injective map of
    /// pattern vertices that carries every pattern edge onto an edge of `g`.
    fn embeds(&self, g: &Small) -> bool {
        let n = g.n();
        let mut map = vec![usize::MAX; n];
        let mut used = 0u16;
        self.extend(g, 0, &mut map, &mut used)
    }

    fn extend(&self, g: &Small, next: usize, map: &mut [usize], used: &mut u16) -> bool {
        let n = g.n();
        if next == n {
            return true;
        }
        for target in 0..n {
            if *used & (1 << target) != 0 {
                continue;
            }
            if g.rows[target].count_ones() < self.pattern.rows[next].count_ones() {
                continue;
            }
            // edges back to already placed pattern vertices must be present
            let ok = (0..next).all(|p| {
                self.pattern.rows[next] & (1 << p) == 0 || g.rows[target] & (1 << map[p]) != 0
            });
            if !ok {
                continue;
            }
            map[next] = target;
            *used |= 1 << target;
            if self.extend(g, next + 1, map, used) {
                return true;
            }
            *used &= !(1 << target);
        }
        map[next] = usize::MAX;
        false
    }
}

/// Is `h` a minor of `g`? Both graphs must have at most ten vertices.
pub fn has_minor(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    MinorChecker::new(h)?.contained_in(g)
}

/// `K4` minus one edge.
pub fn diamond() -> Graph {
    Graph::complete(4).without_edge(0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_forests() {
        assert!(has_minor(&Graph::complete(5), &Graph::complete(5)).unwrap());
        assert!(!has_minor(&Graph::path(8), &Graph::cycle(3)).unwrap());
        let star = Graph::complete_bipartite(1, 6);
        assert!(!has_minor(&star, &Graph::cycle(3)).unwrap());
    }

    #[test]
    fn cycle_contracts_to_triangle() {
        assert!(has_minor(&Graph::cycle(5), &Graph::complete(3)).unwrap());
        assert!(!has_minor(&Graph::cycle(5), &Graph::complete(4)).unwrap());
    }

    #[test]
    fn petersen_has_k5_minor() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let p = Graph::from_edges(10, &edges).unwrap();
        assert!(has_minor(&p, &Graph::complete(5)).unwrap());
        assert!(has_minor(&p, &Graph::complete_bipartite(3, 3)).unwrap());
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            has_minor(&Graph::cycle(11), &Graph::cycle(3)),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn diamond_in_cycle_with_chord() {
        let mut g = Graph::cycle(6);
        assert!(!has_minor(&g, &diamond()).unwrap());
        g.add_edge(0, 3).unwrap();
        assert!(has_minor(&g, &diamond()).unwrap());
        assert!(!has_minor(&g, &Graph::complete(4)).unwrap());
    }
}
