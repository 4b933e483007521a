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

//! Empirical check of the class axioms on a sample of small graphs:
//! (a) not every graph is a member, (b) edgeless graphs are members,
//! (c) isomorphism invariance, (d) closure under deleting and contracting
//! an edge, (e) adding an edge between components is allowed, (f) adding an
//! edge inside a tree component is allowed.

use rand::seq::SliceRandom;
use rand::Rng;

use super::ConstraintOracle;
use crate::graph::{ComponentTracker, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    NotAllGraphs,
    Edgeless,
    Isomorphism,
    MinorClosed,
    WeaklyAddable,
    TreeAddable,
}

impl Axiom {
    pub fn letter(self) -> char {
        match self {
            Axiom::NotAllGraphs => 'a',
            Axiom::Edgeless => 'b',
            Axiom::Isomorphism => 'c',
            Axiom::MinorClosed => 'd',
            Axiom::WeaklyAddable => 'e',
            Axiom::TreeAddable => 'f',
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub axiom: Axiom,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub graphs_checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }

    fn push(&mut self, axiom: Axiom, detail: String) {
        // one example per axiom is plenty, the count is what matters
        self.violations.push(Violation { axiom, detail });
    }
}

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|(u, v)| format!("{}-{}", u + 1, v + 1))
        .collect();
    format!("n={} [{}]", g.n(), edges.join(" "))
}

/// Run every axiom over `sample`, using `relabelings` random permutations
/// per graph for the isomorphism check.
pub fn axiom_check<R: Rng>(
    oracle: &dyn ConstraintOracle,
    sample: &[Graph],
    relabelings: usize,
    rng: &mut R,
) -> AxiomReport {
    let mut report = AxiomReport::default();
    let mut any_rejected = false;
    let max_n = sample.iter().map(Graph::n).max().unwrap_or(0);
    for n in 0..=max_n {
        if !oracle.contains(&Graph::new(n)) {
            report.push(Axiom::Edgeless, format!("edgeless graph on {n} vertices"));
        }
    }
    for g in sample {
        report.graphs_checked += 1;
        let member = oracle.contains(g);
        if !member {
            any_rejected = true;
        }
        let mut perm: Vec<usize> = (0..g.n()).collect();
        for _ in 0..relabelings {
            perm.shuffle(rng);
            if oracle.contains(&g.permuted(&perm)) != member {
                report.push(Axiom::Isomorphism, describe(g));
                break;
            }
        }
        if !member {
            continue;
        }
        for &(u, v) in g.edges() {
            if !oracle.contains(&g.without_edge(u, v)) {
                report.push(Axiom::MinorClosed, format!("deleting {}-{} from {}", u + 1, v + 1, describe(g)));
            }
            if !oracle.contains(&g.contract_edge(u, v)) {
                report.push(Axiom::MinorClosed, format!("contracting {}-{} in {}", u + 1, v + 1, describe(g)));
            }
        }
        let tracker = ComponentTracker::from_graph(g);
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if g.has_edge(u, v) {
                    continue;
                }
                let allowed = oracle.allows(g, &tracker, u, v).unwrap_or(false);
                if !allowed {
                    any_rejected = true;
                }
                if !tracker.same_component(u, v) {
                    if !allowed {
                        report.push(Axiom::WeaklyAddable, format!("{}-{} in {}", u + 1, v + 1, describe(g)));
                    }
                } else if tracker.is_tree_component(u) && !allowed {
                    report.push(Axiom::TreeAddable, format!("{}-{} in {}", u + 1, v + 1, describe(g)));
                }
            }
        }
    }
    if !any_rejected {
        report.push(Axiom::NotAllGraphs, "no sampled graph or edge was rejected".to_string());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{all_graphs, ClassOracle, GraphClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cactus_axioms_on_five_vertices() {
        let sample: Vec<Graph> = all_graphs(5).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = axiom_check(&ClassOracle::new(GraphClass::Cactus), &sample, 2, &mut rng);
        assert!(report.is_clean(), "{:?}", report.violations.first());
    }

    #[test]
    fn unconstrained_violates_a_only() {
        let sample: Vec<Graph> = all_graphs(4).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = axiom_check(
            &ClassOracle::new(GraphClass::Unconstrained),
            &sample,
            1,
            &mut rng,
        );
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].axiom, Axiom::NotAllGraphs);
    }
}
