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


use cgproc::structure::{
    bruteforce_partition, check_decomposition, complete_weight, cross_weight, turan_lower_bound,
    weighted_decomposition, WeightedGraph,
};
use cgproc::Graph;
use proptest::prelude::*;

/// A connected graph: a random recursive tree plus extra edges, with
/// positive weights.
fn weighted_connected() -> impl Strategy<Value = WeightedGraph> {
    (1usize..80).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        let extra = prop::collection::vec((0..n, 0..n), 0..=n / 3);
        let weights = prop::collection::vec(0.05f64..5.0, n);
        (parents, extra, weights).prop_map(move |(parents, extra, weights)| {
            let mut g = Graph::new(n);
            for (i, p) in parents.into_iter().enumerate() {
                g.add_edge(i + 1, p).unwrap();
            }
            for (u, v) in extra {
                if u != v && !g.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
            WeightedGraph::new(g, weights).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn decomposition_postconditions(h in weighted_connected(), frac in 0.001f64..1.5) {
        let a = frac * h.total();
        let delta = h.base().max_degree().max(1);
        let max_w = h.max_weight();
        let d = weighted_decomposition(&h, a, delta, max_w).unwrap();
        let tol = 1e-9 * h.total();
        prop_assert_eq!(check_decomposition(&h, a, delta, max_w, &d, tol), Ok(()));
    }

    #[test]
    fn turan_bound_against_the_exact_maximum(w in prop::collection::vec(0.01f64..10.0, 1..=7)) {
        let s: f64 = w.iter().sum();
        let tol = 1e-9 * s * s;
        for ell in 2..=w.len() + 1 {
            let best = bruteforce_partition(&w, ell).unwrap();
            prop_assert!(turan_lower_bound(&w, ell).unwrap() <= complete_weight(&w) - best.value + tol);
            prop_assert!((cross_weight(&w, &best.blocks) - best.value).abs() <= tol);
            let squares: f64 = best.part_weights.iter().map(|x| x * x).sum();
            prop_assert!((s * s / 2.0 - squares / 2.0 - best.value).abs() <= tol);
            prop_assert!(best.part_weights.len() < ell);
        }
    }
}
