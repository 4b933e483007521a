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


//! Harness behind the `cgproc` binary: replicated sweeps on a worker pool,
//! the invariant-verification suite and the subcommand implementations.

pub mod cli;
pub mod error;
pub mod pool;
pub mod sweep;
pub mod verify;

pub use error::HarnessError;
pub use sweep::{SweepConfig, SweepMode};
pub use verify::{CheckResult, Status, VerifyConfig};
