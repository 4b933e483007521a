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

//! Random orderings of the vertex pairs of `K_n`, and seed splitting.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replicate `index` under `master`; independent of scheduling.
pub fn split_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    /// Draw uniform pairs and skip repeats. Cheap when only a small prefix
    /// of the ordering is needed.
    Lazy,
    /// Incremental Fisher-Yates over all pairs.
    Permutation,
}

#[derive(Debug, Clone)]
enum State {
    Lazy { seen: HashSet<u64> },
    Permutation { pairs: Vec<(u32, u32)>, pos: usize },
}

/// A uniformly random ordering of the pairs of `[n]`, produced one pair at a
/// time. A lazy stream that has used up half of all pairs switches to a
/// shuffled list of the unseen ones, which keeps the ordering uniform.
#[derive(Debug, Clone)]
pub struct EdgeStream {
    n: usize,
    rng: ChaCha8Rng,
    state: State,
    emitted: u64,
    total: u64,
}

impl EdgeStream {
    pub fn new(n: usize, seed: u64, mode: StreamMode) -> Self {
        let mut stream = EdgeStream {
            n,
            rng: rng_from_seed(seed),
            state: State::Lazy {
                seen: HashSet::new(),
            },
            emitted: 0,
            total: pair_count(n),
        };
        if mode == StreamMode::Permutation {
            stream.state = State::Permutation {
                pairs: all_pairs(n),
                pos: 0,
            };
        }
        stream
    }

    pub fn mode(&self) -> StreamMode {
        match self.state {
            State::Lazy { .. } => StreamMode::Lazy,
            State::Permutation { .. } => StreamMode::Permutation,
        }
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn switch_to_permutation(&mut self) {
        if let State::Lazy { seen } = &self.state {
            let n = self.n as u64;
            let rest: Vec<(u32, u32)> = all_pairs(self.n)
                .into_iter()
                .filter(|&(u, v)| !seen.contains(&(u as u64 * n + v as u64)))
                .collect();
            self.state = State::Permutation { pairs: rest, pos: 0 };
        }
    }
}

fn all_pairs(n: usize) -> Vec<(u32, u32)> {
    let mut pairs = Vec::with_capacity(pair_count(n) as usize);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            pairs.push((u, v));
        }
    }
    pairs
}

impl Iterator for EdgeStream {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        if self.emitted >= self.total {
            return None;
        }
        if matches!(self.state, State::Lazy { .. }) && 2 * self.emitted >= self.total {
            self.switch_to_permutation();
        }
        let n = self.n;
        let pair = match &mut self.state {
            State::Lazy { seen } => loop {
                let a = self.rng.gen_range(0..n);
                let mut b = self.rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let (u, v) = (a.min(b), a.max(b));
                if seen.insert(u as u64 * n as u64 + v as u64) {
                    break (u, v);
                }
            },
            State::Permutation { pairs, pos } => {
                let j = self.rng.gen_range(*pos..pairs.len());
                pairs.swap(*pos, j);
                let (u, v) = pairs[*pos];
                *pos += 1;
                (u as usize, v as usize)
            }
        };
        self.emitted += 1;
        Some(pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_pair_exactly_once() {
        for mode in [StreamMode::Lazy, StreamMode::Permutation] {
            let mut seen = HashSet::new();
            let stream = EdgeStream::new(9, 3, mode);
            for (u, v) in stream {
                assert!(u < v && v < 9);
                assert!(seen.insert((u, v)));
            }
            assert_eq!(seen.len(), 36);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a: Vec<_> = EdgeStream::new(50, 11, StreamMode::Lazy).take(100).collect();
        let b: Vec<_> = EdgeStream::new(50, 11, StreamMode::Lazy).take(100).collect();
        let c: Vec<_> = EdgeStream::new(50, 12, StreamMode::Lazy).take(100).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn first_pair_is_uniform() {
        // 10 pairs on 5 vertices; chi-square with 9 degrees of freedom
        let trials = 20_000u64;
        for mode in [StreamMode::Lazy, StreamMode::Permutation] {
            let mut counts = std::collections::HashMap::new();
            for s in 0..trials {
                let p = EdgeStream::new(5, split_seed(99, s), mode).next().unwrap();
                *counts.entry(p).or_insert(0u64) += 1;
            }
            let expect = trials as f64 / 10.0;
            let chi: f64 = counts
                .values()
                .map(|&c| (c as f64 - expect).powi(2) / expect)
                .sum();
            // 0.999 quantile of chi-square(9) is 27.88
            assert!(counts.len() == 10 && chi < 27.88, "{mode:?}: {chi}");
        }
    }

    #[test]
    fn split_seeds_differ() {
        let s: HashSet<u64> = (0..1000).map(|i| split_seed(5, i)).collect();
        assert_eq!(s.len(), 1000);
    }
}
