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


//! Worker pool over independent tasks. Results come back in input order, so
//! output never depends on the number of threads.

use rayon::prelude::*;

use cgproc::process::split_seed;

use crate::HarnessError;

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Seed of replicate `index` under `master`.
pub fn replicate_seed(master: u64, index: usize) -> u64 {
    split_seed(master, index as u64)
}

pub fn parallel_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<R>, HarnessError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs == 0 {
        return Err(HarnessError::Config("--jobs must be at least 1".into()));
    }
    if jobs == 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}
