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

//! Block (biconnected component) decomposition.

use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// Edge lists of the blocks of `g`, found with Tarjan's lowpoint DFS.
/// Isolated vertices form no block.
pub fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let edges = g.edges();
    let (block_of, count) = edge_blocks(g.n(), edges);
    let mut out = vec![Vec::new(); count];
    for (id, &b) in block_of.iter().enumerate() {
        out[b].push(edges[id]);
    }
    out
}

/// Block index of every edge of the simple graph on `0..n` with the given
/// edges, and the number of blocks.
pub fn edge_blocks(n: usize, edges: &[(usize, usize)]) -> (Vec<usize>, usize) {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    let mut disc = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut block_of = vec![NONE; edges.len()];
    let mut count = 0;
    // (vertex, edge to parent, next adjacency index)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    for s in 0..n {
        if disc[s] != NONE {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        frames.push((s, NONE, 0));
        while let Some(&(v, pe, i)) = frames.last() {
            if i < adj[v].len() {
                frames.last_mut().unwrap().2 += 1;
                let (w, id) = adj[v][i];
                if id == pe {
                    continue;
                }
                if disc[w] == NONE {
                    edge_stack.push(id);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, id, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(id);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        while let Some(id) = edge_stack.pop() {
                            block_of[id] = count;
                            if id == pe {
                                break;
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    (block_of, count)
}

/// Every block is a single edge or a chordless cycle, i.e. every edge lies
/// on at most one cycle.
pub fn is_cactus(g: &Graph) -> bool {
    CactusTester::default().test(g.n(), g.edges())
}

/// [`is_cactus`] with reusable buffers: a DFS marks the tree path closed by
/// each back edge and fails when a tree edge is marked twice.
#[derive(Debug, Default)]
pub struct CactusTester {
    start: Vec<u32>,
    list: Vec<u32>,
    depth: Vec<u32>,
    parent: Vec<u32>,
    used: Vec<bool>,
    frames: Vec<(u32, u32)>,
}

impl CactusTester {
    /// Membership of the simple graph on `0..n` with the given edges.
    pub fn test(&mut self, n: usize, edges: &[(usize, usize)]) -> bool {
        // a cactus has at most floor(3(n-1)/2) edges
        if 2 * edges.len() > 3 * n.saturating_sub(1) {
            return false;
        }
        const NIL: u32 = u32::MAX;
        self.start.clear();
        self.start.resize(n + 1, 0);
        for &(u, v) in edges {
            self.start[u + 1] += 1;
            self.start[v + 1] += 1;
        }
        for i in 0..n {
            self.start[i + 1] += self.start[i];
        }
        self.list.clear();
        self.list.resize(2 * edges.len(), 0);
        // fill from the back using the end offsets
        for &(u, v) in edges {
            self.start[u + 1] -= 1;
            self.list[self.start[u + 1] as usize] = v as u32;
            self.start[v + 1] -= 1;
            self.list[self.start[v + 1] as usize] = u as u32;
        }
        // start[i + 1] now holds the beginning of i's list; shift back
        self.start.remove(0);
        self.start.push(2 * edges.len() as u32);
        self.depth.clear();
        self.depth.resize(n, NIL);
        self.parent.clear();
        self.parent.resize(n, NIL);
        // used[v]: the tree edge from v to its parent lies on a cycle
        self.used.clear();
        self.used.resize(n, false);
        for root in 0..n {
            if self.depth[root] != NIL {
                continue;
            }
            self.depth[root] = 0;
            self.frames.clear();
            self.frames.push((root as u32, self.start[root]));
            while let Some(&(v, pos)) = self.frames.last() {
                let v = v as usize;
                if pos == self.start[v + 1] {
                    self.frames.pop();
                    continue;
                }
                self.frames.last_mut().unwrap().1 += 1;
                let w = self.list[pos as usize] as usize;
                if self.depth[w] == NIL {
                    self.depth[w] = self.depth[v] + 1;
                    self.parent[w] = v as u32;
                    self.frames.push((w as u32, self.start[w]));
                } else if self.depth[w] + 1 < self.depth[v] {
                    // back edge to a proper ancestor: mark the tree path
                    let mut x = v;
                    while x != w {
                        if self.used[x] {
                            return false;
                        }
                        self.used[x] = true;
                        x = self.parent[x] as usize;
                    }
                }
            }
        }
        true
    }
}
