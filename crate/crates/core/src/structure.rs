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

//! Weighted connected decomposition and the weighted Turán bound.

use std::collections::VecDeque;

use crate::error::{GraphError, StructureError};
use crate::graph::{largest_component, pendant_tree_decomposition, Graph};

/// Largest vertex count accepted by the partition brute force.
pub const BRUTEFORCE_LIMIT: usize = 8;

/// A connected graph with positive vertex weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    base: Graph,
    weight: Vec<f64>,
}

impl WeightedGraph {
    pub fn new(base: Graph, weight: Vec<f64>) -> Result<Self, StructureError> {
        if weight.len() != base.n() {
            return Err(StructureError::WeightCount {
                got: weight.len(),
                expected: base.n(),
            });
        }
        if let Some(v) = weight.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(StructureError::WeightBound {
                vertex: v,
                weight: weight[v],
                bound: f64::INFINITY,
            });
        }
        if !base.is_connected() {
            return Err(GraphError::Disconnected.into());
        }
        Ok(WeightedGraph { base, weight })
    }

    pub fn unit(base: Graph) -> Result<Self, StructureError> {
        let n = base.n();
        Self::new(base, vec![1.0; n])
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weight[v]
    }

    /// `W(H)`.
    pub fn total(&self) -> f64 {
        self.weight.iter().sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.weight.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Vertex sets in the order they were cut off, each sorted.
    pub parts: Vec<Vec<usize>>,
    pub part_weights: Vec<f64>,
    /// `W(H)` minus the weight of all parts.
    pub leftover: f64,
}

/// Split `h` into connected parts of weight in `[a, a*delta + max_w]`,
/// leaving less than `a` uncovered.
///
/// Each round runs a BFS from the smallest remaining vertex (neighbours in
/// label order), computes subtree weights `W(x)` and cuts off the subtree of
/// the vertex with the smallest `W(x) >= a`, ties to the smaller label.
pub fn weighted_decomposition(
    h: &WeightedGraph,
    a: f64,
    delta: usize,
    max_w: f64,
) -> Result<Decomposition, StructureError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(StructureError::Parameter(format!("a = {a} must be positive")));
    }
    if delta < 1 {
        return Err(StructureError::Parameter("delta must be at least 1".into()));
    }
    let g = &h.base;
    let n = g.n();
    for v in 0..n {
        if g.degree(v) > delta {
            return Err(StructureError::DegreeBound {
                vertex: v,
                degree: g.degree(v),
                bound: delta,
            });
        }
        if h.weight[v] > max_w {
            return Err(StructureError::WeightBound {
                vertex: v,
                weight: h.weight[v],
                bound: max_w,
            });
        }
    }
    let mut sorted_adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut a = g.neighbors(v).to_vec();
            a.sort_unstable();
            a
        })
        .collect();
    for a in sorted_adj.iter_mut() {
        a.dedup();
    }

    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut parts = Vec::new();
    let mut part_weights = Vec::new();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut subtree = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    while remaining > 0 {
        let root = (0..n).find(|&v| alive[v]).expect("remaining > 0");
        order.clear();
        seen[root] = true;
        parent[root] = usize::MAX;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &sorted_adj[x] {
                if alive[y] && !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        debug_assert_eq!(order.len(), remaining, "remainder stays connected");
        for &x in &order {
            seen[x] = false;
            subtree[x] = h.weight[x];
        }
        for &x in order.iter().rev() {
            if parent[x] != usize::MAX {
                let p = parent[x];
                subtree[p] += subtree[x];
            }
        }
        if subtree[root] < a {
            break;
        }
        let mut z = root;
        for &x in &order {
            if subtree[x] >= a && (subtree[x] < subtree[z] || (subtree[x] == subtree[z] && x < z)) {
                z = x;
            }
        }
        // D_z: z and its BFS descendants; in BFS order every descendant comes after z
        let mut part = vec![z];
        let mut in_part = vec![false; n];
        in_part[z] = true;
        let start = order.iter().position(|&x| x == z).expect("z was visited");
        for &x in &order[start + 1..] {
            if in_part[parent[x]] {
                in_part[x] = true;
                part.push(x);
            }
        }
        for &x in &part {
            alive[x] = false;
        }
        remaining -= part.len();
        part.sort_unstable();
        part_weights.push(part.iter().map(|&x| h.weight[x]).sum());
        parts.push(part);
    }
    let covered: f64 = part_weights.iter().sum();
    Ok(Decomposition {
        parts,
        part_weights,
        leftover: h.total() - covered,
    })
}

/// Check the three postconditions of a decomposition literally. Weight
/// comparisons allow `tol` of floating-point slack.
pub fn check_decomposition(
    h: &WeightedGraph,
    a: f64,
    delta: usize,
    max_w: f64,
    d: &Decomposition,
    tol: f64,
) -> Result<(), String> {
    let n = h.base.n();
    let mut owner = vec![usize::MAX; n];
    for (i, part) in d.parts.iter().enumerate() {
        if part.is_empty() {
            return Err(format!("part {i} is empty"));
        }
        for &v in part {
            if v >= n {
                return Err(format!("part {i} names vertex {v} outside the graph"));
            }
            if owner[v] != usize::MAX {
                return Err(format!("vertex {v} is in parts {} and {i}", owner[v]));
            }
            owner[v] = i;
        }
        if !h.base.induced(part).is_connected() {
            return Err(format!("part {i} does not induce a connected subgraph"));
        }
        let w: f64 = part.iter().map(|&v| h.weight[v]).sum();
        if (w - d.part_weights[i]).abs() > tol {
            return Err(format!("part {i} reports weight {} but has {w}", d.part_weights[i]));
        }
        let hi = a * delta as f64 + max_w;
        if w < a - tol || w > hi + tol {
            return Err(format!("part {i} has weight {w} outside [{a}, {hi}]"));
        }
    }
    let covered: f64 = d.part_weights.iter().sum();
    let left = h.total() - covered;
    if left >= a + tol {
        return Err(format!("uncovered weight {left} is not below a = {a}"));
    }
    if (left - d.leftover).abs() > tol {
        return Err(format!("leftover reported as {} but is {left}", d.leftover));
    }
    Ok(())
}

/// Lower bound on `w(K_n) - A_n`: `S/2 * (S/(l-1) - M)`.
pub fn turan_lower_bound(weights: &[f64], ell: usize) -> Result<f64, StructureError> {
    if ell < 2 {
        return Err(StructureError::Parameter(format!("l = {ell} must be at least 2")));
    }
    if weights.is_empty() {
        return Err(StructureError::Parameter("weight vector is empty".into()));
    }
    let s: f64 = weights.iter().sum();
    let m = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(s / 2.0 * (s / (ell - 1) as f64 - m))
}

/// `w(K_n) = sum over pairs of w(x) w(y)`.
pub fn complete_weight(weights: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..weights.len() {
        for j in i + 1..weights.len() {
            total += weights[i] * weights[j];
        }
    }
    total
}

/// The maximising partition found by [`bruteforce_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionMax {
    /// `A_n`.
    pub value: f64,
    /// Part index of each vertex.
    pub blocks: Vec<usize>,
    /// `W(Q)` per part.
    pub part_weights: Vec<f64>,
}

/// `A_n`, the largest edge weight of a `K_l`-free subgraph of `K_n`, as the
/// maximum over partitions of the vertices into at most `l - 1` parts of the
/// weight between parts.
pub fn bruteforce_max_weight_clique_free(weights: &[f64], ell: usize) -> Result<f64, StructureError> {
    bruteforce_partition(weights, ell).map(|p| p.value)
}

/// Enumerates restricted-growth strings; the first maximum in that order
/// wins.
pub fn bruteforce_partition(weights: &[f64], ell: usize) -> Result<PartitionMax, StructureError> {
    let n = weights.len();
    if n > BRUTEFORCE_LIMIT {
        return Err(GraphError::TooLarge {
            n,
            limit: BRUTEFORCE_LIMIT,
        }
        .into());
    }
    if ell < 2 {
        return Err(StructureError::Parameter(format!("l = {ell} must be at least 2")));
    }
    if n == 0 {
        return Ok(PartitionMax {
            value: 0.0,
            blocks: Vec::new(),
            part_weights: Vec::new(),
        });
    }
    let k = ell - 1;
    let mut rgs = vec![0usize; n];
    let mut best: Option<PartitionMax> = None;
    loop {
        let parts = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut pw = vec![0.0; parts];
        for (v, &b) in rgs.iter().enumerate() {
            pw[b] += weights[v];
        }
        let s: f64 = pw.iter().sum();
        let sq: f64 = pw.iter().map(|w| w * w).sum();
        let value = (s * s - sq) / 2.0;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(PartitionMax {
                value,
                blocks: rgs.clone(),
                part_weights: pw,
            });
        }
        if !next_rgs(&mut rgs, k) {
            break;
        }
    }
    Ok(best.expect("at least one partition"))
}

/// Advance a restricted-growth string with at most `k` blocks.
fn next_rgs(rgs: &mut [usize], k: usize) -> bool {
    let n = rgs.len();
    for i in (1..n).rev() {
        let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
        if rgs[i] <= prefix_max && rgs[i] + 1 < k {
            rgs[i] += 1;
            for r in rgs[i + 1..].iter_mut() {
                *r = 0;
            }
            return true;
        }
    }
    false
}

/// Edge weight between parts computed pairwise, used to check
/// `A = S^2/2 - sum W(Q)^2 / 2`.
pub fn cross_weight(weights: &[f64], blocks: &[usize]) -> f64 {
    let mut total = 0.0;
    for i in 0..weights.len() {
        for j in i + 1..weights.len() {
            if blocks[i] != blocks[j] {
                total += weights[i] * weights[j];
            }
        }
    }
    total
}

/// Result of decomposing the 2-core of a graph's largest component, weighted
/// by pendant tree sizes.
#[derive(Debug, Clone)]
pub struct Replay {
    /// Core vertices of the largest component, in original labels.
    pub core_vertices: Vec<usize>,
    pub giant_size: usize,
    pub total_weight: f64,
    pub max_weight: f64,
    pub max_degree: usize,
    pub a: f64,
    /// Parts in original labels.
    pub decomposition: Decomposition,
    pub well_formed: Result<(), String>,
}

/// Apply [`weighted_decomposition`] to the 2-core of the largest component
/// of `g`, with `w(x) = |T_x|`, `delta` the core's maximum degree and `M` the
/// largest pendant tree. This uses the 2-core itself, not a spanning
/// subgraph of it, so it is a demonstration of the procedure on simulated
/// data rather than of any probabilistic statement.
pub fn replay_decomposition(g: &Graph, a: f64) -> Result<Replay, StructureError> {
    let (giant, size) = largest_component(g);
    let sub = g.induced(&giant);
    let forest = pendant_tree_decomposition(&sub)?;
    let core_local: Vec<usize> = (0..sub.n()).filter(|&v| forest.in_core[v]).collect();
    let core = forest.core.induced(&core_local);
    let tree_w = forest.weights();
    let weights: Vec<f64> = core_local.iter().map(|&v| tree_w[v] as f64).collect();
    let wg = WeightedGraph::new(core, weights)?;
    let delta = wg.base().max_degree().max(1);
    let max_w = wg.max_weight();
    let dec = weighted_decomposition(&wg, a, delta, max_w)?;
    let well_formed = check_decomposition(&wg, a, delta, max_w, &dec, 1e-9);
    let core_vertices: Vec<usize> = core_local.iter().map(|&v| giant[v]).collect();
    let decomposition = Decomposition {
        parts: dec
            .parts
            .iter()
            .map(|p| p.iter().map(|&v| core_vertices[v]).collect())
            .collect(),
        part_weights: dec.part_weights.clone(),
        leftover: dec.leftover,
    };
    Ok(Replay {
        core_vertices,
        giant_size: size,
        total_weight: wg.total(),
        max_weight: max_w,
        max_degree: delta,
        a,
        decomposition,
        well_formed,
    })
}
