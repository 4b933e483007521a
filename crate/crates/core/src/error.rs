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

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("{what} = {value} is outside its domain ({range})")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("solver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid solver config: tolerance {tolerance}, max_iterations {max_iterations}")]
    InvalidConfig {
        tolerance: f64,
        max_iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) is already present")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is a tree (empty 2-core)")]
    IsTree,
    #[error("graph is not connected")]
    Disconnected,
    #[error("malformed edge list at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("graph has {n} vertices, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot accept {m0} edges on {n} vertices in class {class}")]
    InfeasibleStop { m0: usize, n: usize, class: String },
    #[error("step {t} exceeds the number of vertex pairs {pairs}")]
    StepOutOfRange { t: u64, pairs: u64 },
    #[error("invalid process config: {0}")]
    InvalidConfig(String),
    #[error("no addable edge left after {accepted} edges")]
    Saturated { accepted: usize },
    #[error("invariant violated at step {t}: {what}")]
    Invariant { t: u64, what: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex {vertex} has degree {degree} above the bound {bound}")]
    DegreeBound {
        vertex: usize,
        degree: usize,
        bound: usize,
    },
    #[error("vertex {vertex} has weight {weight} outside (0, {bound}]")]
    WeightBound { vertex: usize, weight: f64, bound: f64 },
    #[error("weight vector length {got} does not match {expected} vertices")]
    WeightCount { got: usize, expected: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
