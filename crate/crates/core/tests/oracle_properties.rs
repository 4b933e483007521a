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


use cgproc::constraints::MinorOracle;
use cgproc::graph::two_core_mask;
use cgproc::process::Engine;
use cgproc::{ClassOracle, ComponentTracker, ConstraintOracle, Graph, GraphClass};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// A member of `class` grown by a constrained process on a random stream,
/// stopped after a random number of queries.
fn random_member(rng: &mut ChaCha8Rng, n: usize, class: GraphClass, oracle: &dyn ConstraintOracle) -> Graph {
    let mut order = pairs(n);
    order.shuffle(rng);
    let stop = rng.gen_range(0..=order.len());
    let mut g = Graph::new(n);
    let mut tracker = ComponentTracker::new(n);
    for &(u, v) in &order[..stop] {
        if oracle.allows(&g, &tracker, u, v).unwrap() {
            g.add_edge(u, v).unwrap();
            tracker.record_edge(u, v);
        }
    }
    debug_assert!(class.contains(&g));
    g
}

fn non_edges(g: &Graph) -> Vec<(usize, usize)> {
    pairs(g.n()).into_iter().filter(|&(u, v)| !g.has_edge(u, v)).collect()
}

#[test]
fn seven_vertex_members_agree_with_minor_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for class in GraphClass::CONSTRAINED {
        let fast = ClassOracle::new(class);
        let minors = MinorOracle::new(class);
        let (mut accepted, mut rejected) = (0, 0);
        for _ in 0..10_000 {
            let g = random_member(&mut rng, 7, class, &fast);
            let tracker = ComponentTracker::from_graph(&g);
            let mut engine = Engine::from_graph(&g, class);
            for (u, v) in non_edges(&g) {
                let expected = minors.allows(&g, &tracker, u, v).unwrap();
                assert_eq!(fast.allows(&g, &tracker, u, v).unwrap(), expected, "{class} {:?} + {u}{v}", g.edges());
                assert_eq!(engine.decide(u, v), expected, "{class} engine {:?} + {u}{v}", g.edges());
                if expected {
                    accepted += 1;
                } else {
                    rejected += 1;
                }
            }
        }
        assert!(accepted > 1000 && rejected > 1000, "{class}: {accepted} accepted, {rejected} rejected");
    }
}

#[test]
fn shortcuts_and_engine_agree_with_the_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for class in GraphClass::CONSTRAINED {
        let fast = ClassOracle::new(class);
        let naive = ClassOracle::naive(class);
        let mut queries = 0;
        while queries < 100_000 {
            let n = rng.gen_range(4..40);
            let g = random_member(&mut rng, n, class, &fast);
            let tracker = ComponentTracker::from_graph(&g);
            let mut engine = Engine::from_graph(&g, class);
            let mut candidates = non_edges(&g);
            candidates.shuffle(&mut rng);
            for (u, v) in candidates.into_iter().take(60) {
                let expected = naive.allows(&g, &tracker, u, v).unwrap();
                assert_eq!(fast.allows(&g, &tracker, u, v).unwrap(), expected, "{class} {:?} + {u}{v}", g.edges());
                assert_eq!(engine.decide(u, v), expected, "{class} engine {:?} + {u}{v}", g.edges());
                queries += 1;
            }
        }
    }
}

#[test]
fn rejections_persist_in_supergraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for class in GraphClass::CONSTRAINED {
        let oracle = ClassOracle::new(class);
        let mut checked = 0;
        while checked < 2_000 {
            let n = rng.gen_range(5..25);
            let g = random_member(&mut rng, n, class, &oracle);
            let tracker = ComponentTracker::from_graph(&g);
            let rejected: Vec<(usize, usize)> = non_edges(&g)
                .into_iter()
                .filter(|&(u, v)| !oracle.allows(&g, &tracker, u, v).unwrap())
                .collect();
            if rejected.is_empty() {
                continue;
            }
            // grow g inside the class, avoiding the rejected pairs
            let mut h = g.clone();
            let mut th = tracker.clone();
            let mut extra = non_edges(&g);
            extra.shuffle(&mut rng);
            for (u, v) in extra {
                if !rejected.contains(&(u, v)) && rng.gen_bool(0.5) && oracle.allows(&h, &th, u, v).unwrap() {
                    h.add_edge(u, v).unwrap();
                    th.record_edge(u, v);
                }
            }
            for &(u, v) in &rejected {
                assert!(!oracle.allows(&h, &th, u, v).unwrap(), "{class}: {u}{v} accepted after growth");
                checked += 1;
            }
        }
    }
}

#[test]
fn engine_core_matches_peeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for class in GraphClass::CONSTRAINED {
        for _ in 0..200 {
            let n = rng.gen_range(2..60);
            let mut engine = Engine::new(n, class, false);
            let mut order = pairs(n);
            order.shuffle(&mut rng);
            for (u, v) in order.into_iter().take(2 * n) {
                let accept = engine.decide(u, v);
                engine.apply(u, v, accept);
                let mask = two_core_mask(engine.graph());
                assert!((0..n).all(|x| engine.in_core(x) == mask[x]), "{class}");
            }
        }
    }
}
