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

//! Class tests against brute-force forbidden-minor search.

use cgproc::constraints::{all_graphs, ClassTester, MinorOracle};
use cgproc::{ConstraintOracle, Graph, GraphClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[test]
fn membership_matches_minor_search_up_to_six_vertices() {
    let mut tester = ClassTester::new();
    for class in GraphClass::CONSTRAINED {
        let minors = MinorOracle::new(class);
        for n in 1..=6 {
            for g in all_graphs(n) {
                assert_eq!(
                    tester.contains(class, &g),
                    minors.contains(&g),
                    "{class} on {:?}",
                    g.edges()
                );
            }
        }
    }
}

#[test]
fn membership_matches_minor_search_on_random_larger_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tester = ClassTester::new();
    for class in GraphClass::CONSTRAINED {
        let minors = MinorOracle::new(class);
        let (mut members, mut others) = (0, 0);
        for i in 0..600 {
            let n = 7 + i % 3;
            let p = rng.gen_range(0.15..0.6);
            let g = random_graph(&mut rng, n, p);
            let expected = minors.contains(&g);
            assert_eq!(tester.contains(class, &g), expected, "{class} on {:?}", g.edges());
            if expected {
                members += 1;
            } else {
                others += 1;
            }
        }
        assert!(members > 20 && others > 20, "{class}: {members}/{others}");
    }
}
