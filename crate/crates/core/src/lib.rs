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

//! Simulation and analysis of the constrained random graph process for
//! minor-closed graph classes (cactus, outerplanar, series-parallel,
//! planar).
//!
//! Edges of `K_n` arrive in uniformly random order and each is kept iff the
//! graph stays in the class. The crate provides the process engine, class
//! oracles, closed-form predictions and the machinery used to check both
//! against each other.

pub mod analytic;
pub mod constraints;
pub mod error;
pub mod graph;
pub mod process;
pub mod structure;

pub use constraints::{ClassOracle, ConstraintOracle, GraphClass};
pub use error::{AnalyticError, GraphError, ProcessError, StructureError};
pub use graph::{ComponentTracker, Graph};
