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


use cgproc::ProcessError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit status: 1 for invariant failures, 2 for everything the
    /// caller can fix by changing the arguments or the environment.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Invariant(_) => 1,
            HarnessError::Config(_) | HarnessError::Io(_) => 2,
        }
    }
}

impl From<ProcessError> for HarnessError {
    fn from(e: ProcessError) -> Self {
        match e {
            ProcessError::Invariant { .. } => HarnessError::Invariant(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}
