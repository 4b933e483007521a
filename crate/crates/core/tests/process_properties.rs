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


use std::collections::HashMap;

use cgproc::process::{random_greedy, run, split_seed, Checkpoints, ProcessConfig, StopRule};
use cgproc::{ClassOracle, ComponentTracker, ConstraintOracle, Graph, GraphClass};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn class_strategy() -> impl Strategy<Value = GraphClass> {
    prop::sample::select(GraphClass::CONSTRAINED.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accounting_and_containment(class in class_strategy(), n in 2usize..120, c in 0.2f64..6.0, seed in any::<u64>()) {
        let t = ((c * n as f64 / 2.0).round() as u64).clamp(1, cgproc::process::pair_count(n));
        let steps: Vec<u64> = (1..=8).map(|k| (k * t / 8).max(1)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let mut cfg = ProcessConfig::new(n, class, StopRule::AtStep(t), seed)
            .with_checkpoints(Checkpoints::Steps(steps))
            .with_er(true);
        cfg.verify_membership = true;
        let trace = run(&cfg).unwrap();
        let rows = trace.rows();
        for w in rows.windows(2) {
            prop_assert!(w[0].m <= w[1].m && w[0].r <= w[1].r);
        }
        for row in &rows {
            prop_assert_eq!(row.m as u64 + row.r, row.t);
            prop_assert!(row.r <= row.er_excess.unwrap() as u64);
        }
        // P(n,t) is a subgraph of G(n,t): every accepted edge is among the first t pairs
        let prefix: std::collections::HashSet<(usize, usize)> = cfg.stream().take(t as usize).collect();
        for e in trace.graph.edges() {
            prop_assert!(prefix.contains(e));
        }
        prop_assert!(class.contains(&trace.graph));
    }

    #[test]
    fn identical_configs_give_identical_traces(class in class_strategy(), n in 2usize..200, seed in any::<u64>()) {
        let cfg = ProcessConfig::new(n, class, StopRule::AtStep(n as u64), seed)
            .with_checkpoints(Checkpoints::Steps(vec![(n as u64 / 2).max(1)]))
            .with_er(true);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        run(&cfg).unwrap().write_csv(&mut a).unwrap();
        run(&cfg).unwrap().write_csv(&mut b).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// Labelled graphs on at most six vertices as bitmasks over the pairs.
struct Small {
    n: usize,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    canon: HashMap<u32, u32>,
    perms: Vec<Vec<usize>>,
}

impl Small {
    fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        Small { n, pairs, index, canon: HashMap::new(), perms }
    }

    fn mask(&self, g: &Graph) -> u32 {
        g.edges().iter().map(|&(u, v)| 1 << self.index[&(u.min(v), u.max(v))]).sum()
    }

    fn graph(&self, mask: u32) -> Graph {
        let edges: Vec<(usize, usize)> =
            self.pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Graph::from_edges(self.n, &edges).unwrap()
    }

    /// Isomorphism type: the smallest mask over all relabellings.
    fn canonical(&mut self, mask: u32) -> u32 {
        if let Some(&c) = self.canon.get(&mask) {
            return c;
        }
        let mut best = u32::MAX;
        for p in &self.perms {
            let mut m = 0;
            for (i, &(u, v)) in self.pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    m |= 1 << self.index[&(a, b)];
                }
            }
            best = best.min(m);
        }
        self.canon.insert(mask, best);
        best
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Exact law of the isomorphism type of A(n, m0): each accepted edge is
/// uniform over the pairs that may still be added.
fn exact_law(small: &mut Small, class: GraphClass, m0: usize) -> HashMap<u32, f64> {
    let oracle = ClassOracle::new(class);
    let mut layer: HashMap<u32, f64> = HashMap::from([(0, 1.0)]);
    for _ in 0..m0 {
        let mut next: HashMap<u32, f64> = HashMap::new();
        for (&mask, &p) in &layer {
            let g = small.graph(mask);
            let tracker = ComponentTracker::from_graph(&g);
            let addable: Vec<usize> = (0..small.pairs.len())
                .filter(|&i| mask >> i & 1 == 0)
                .filter(|&i| {
                    let (u, v) = small.pairs[i];
                    oracle.allows(&g, &tracker, u, v).unwrap()
                })
                .collect();
            assert!(!addable.is_empty(), "{class}: saturated before {m0} edges");
            for i in &addable {
                *next.entry(mask | 1 << i).or_default() += p / addable.len() as f64;
            }
        }
        layer = next;
    }
    let mut law: HashMap<u32, f64> = HashMap::new();
    for (mask, p) in layer {
        *law.entry(small.canonical(mask)).or_default() += p;
    }
    law
}

/// Pearson statistic of the observed type counts against `law`, and the
/// rejection threshold at significance 1e-3.
fn chi_square(law: &HashMap<u32, f64>, counts: &HashMap<u32, u64>, trials: u64) -> (f64, f64) {
    assert!(counts.keys().all(|k| law.contains_key(k)), "sampled a type of probability zero");
    let stat = law
        .iter()
        .map(|(k, &p)| {
            let expected = p * trials as f64;
            let observed = counts.get(k).copied().unwrap_or(0) as f64;
            (observed - expected).powi(2) / expected
        })
        .sum();
    let df = (law.len() - 1).max(1) as f64;
    (stat, ChiSquared::new(df).unwrap().inverse_cdf(1.0 - 1e-3))
}

#[test]
fn process_and_greedy_match_the_exact_law() {
    const TRIALS: u64 = 100_000;
    let cases = [
        (GraphClass::Cactus, 5, 5),
        (GraphClass::Outerplanar, 6, 9),
        (GraphClass::SeriesParallel, 6, 9),
        (GraphClass::Planar, 6, 12),
    ];
    for (ci, &(class, n, m0)) in cases.iter().enumerate() {
        let mut small = Small::new(n);
        let law = exact_law(&mut small, class, m0);
        assert!(law.len() >= 2, "{class}: a single type makes the test vacuous");
        let mut from_process: HashMap<u32, u64> = HashMap::new();
        let mut from_greedy: HashMap<u32, u64> = HashMap::new();
        for i in 0..TRIALS {
            let seed = split_seed(ci as u64, i);
            let trace = run(&ProcessConfig::new(n, class, StopRule::AtAccepted(m0), seed)).unwrap();
            let m = small.mask(&trace.graph);
            *from_process.entry(small.canonical(m)).or_default() += 1;
            let g = random_greedy(n, class, m0, seed).unwrap();
            let m = small.mask(&g);
            *from_greedy.entry(small.canonical(m)).or_default() += 1;
        }
        for (name, counts) in [("process", &from_process), ("greedy", &from_greedy)] {
            let (stat, limit) = chi_square(&law, counts, TRIALS);
            assert!(stat <= limit, "{class} {name}: chi-square {stat:.2} above {limit:.2} ({} types)", law.len());
        }
    }
}
