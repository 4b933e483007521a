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

//! Series-parallel (K4-minor-free) recognition by reduction.

use crate::graph::Graph;

/// Repeatedly delete vertices of degree at most one and suppress vertices
/// of degree two (joining their neighbours, merging any parallel edge). The
/// graph is K4-minor-free iff this empties it.
pub fn is_series_parallel(g: &Graph) -> bool {
    SeriesParallelTester::default().test(g.n(), g.edges())
}

/// [`is_series_parallel`] with reusable buffers.
#[derive(Debug, Default)]
pub struct SeriesParallelTester {
    adj: Vec<Vec<u32>>,
    alive: Vec<bool>,
    queue: Vec<u32>,
}

impl SeriesParallelTester {
    /// Membership of the simple graph on `0..n` with the given edges.
    pub fn test(&mut self, n: usize, edges: &[(usize, usize)]) -> bool {
        if n >= 2 && edges.len() > 2 * n - 3 {
            return false;
        }
        if self.adj.len() < n {
            self.adj.resize_with(n, Vec::new);
        }
        let adj = &mut self.adj[..n];
        for list in adj.iter_mut() {
            list.clear();
        }
        for &(u, v) in edges {
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        self.alive.clear();
        self.alive.resize(n, true);
        let alive = &mut self.alive;
        let mut remaining = n;
        let queue = &mut self.queue;
        queue.clear();
        queue.extend((0..n as u32).filter(|&v| adj[v as usize].len() <= 2));
        fn unlink(list: &mut Vec<u32>, b: u32) {
            if let Some(i) = list.iter().position(|&x| x == b) {
                list.swap_remove(i);
            }
        }
        while let Some(v) = queue.pop() {
            let v = v as usize;
            if !alive[v] || adj[v].len() > 2 {
                continue;
            }
            alive[v] = false;
            remaining -= 1;
            let (a, b) = match adj[v][..] {
                [a, b] => (a, Some(b)),
                [a] => (a, None),
                _ => {
                    adj[v].clear();
                    continue;
                }
            };
            adj[v].clear();
            unlink(&mut adj[a as usize], v as u32);
            match b {
                Some(b) => {
                    unlink(&mut adj[b as usize], v as u32);
                    if adj[a as usize].contains(&b) {
                        for x in [a, b] {
                            if adj[x as usize].len() <= 2 {
                                queue.push(x);
                            }
                        }
                    } else {
                        adj[a as usize].push(b);
                        adj[b as usize].push(a);
                    }
                }
                None => {
                    if adj[a as usize].len() <= 2 {
                        queue.push(a);
                    }
                }
            }
        }
        remaining == 0
    }
}
