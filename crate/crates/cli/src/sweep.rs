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


//! Replicated runs over an `n x c` grid and their per-cell summaries.

use std::fmt;
use std::io::Write;

use cgproc::process::{pair_count, run, ProcessConfig, StopRule};
use cgproc::GraphClass;

use crate::pool::{parallel_map, replicate_seed};
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepMode {
    /// Stop after `t = c n / 2` queries.
    Steps,
    /// Stop once `m0 = c n / 2` edges are accepted.
    Accepted,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Steps => "steps",
            SweepMode::Accepted => "accepted",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub cs: Vec<f64>,
    pub mode: SweepMode,
    pub replicates: usize,
    pub seed: u64,
    pub class: GraphClass,
    pub jobs: usize,
    pub track_er: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.ns.is_empty() || self.cs.is_empty() {
            return Err(HarnessError::Config("the n and c grids must be non-empty".into()));
        }
        if self.replicates == 0 {
            return Err(HarnessError::Config("replicates must be at least 1".into()));
        }
        if let Some(c) = self.cs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(HarnessError::Config(format!("c = {c} must be positive")));
        }
        if let Some(n) = self.ns.iter().find(|&&n| n == 0) {
            return Err(HarnessError::Config(format!("n = {n} must be positive")));
        }
        Ok(())
    }

    /// `(n, c)` cells in row-major order.
    pub fn cells(&self) -> Vec<(usize, f64)> {
        self.ns
            .iter()
            .flat_map(|&n| self.cs.iter().map(move |&c| (n, c)))
            .collect()
    }
}

/// `round(c n / 2)`.
pub fn half_n_scaled(n: usize, c: f64) -> u64 {
    (c * n as f64 / 2.0).round() as u64
}

pub fn stop_rule(mode: SweepMode, n: usize, c: f64) -> StopRule {
    let target = half_n_scaled(n, c);
    match mode {
        SweepMode::Steps => StopRule::AtStep(target.min(pair_count(n))),
        SweepMode::Accepted => StopRule::AtAccepted(target as usize),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub t: u64,
    pub m: usize,
    pub r: u64,
    pub giant: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRow {
    pub n: usize,
    pub c: f64,
    pub replicate: usize,
    pub seed: u64,
    pub outcome: Result<Outcome, String>,
}

pub const REPLICATE_HEADER: &str = "class,mode,n,c,replicate,seed,t,m,r,giant,error";

pub fn run_replicate(cfg: &SweepConfig, n: usize, c: f64, replicate: usize) -> ReplicateRow {
    let seed = replicate_seed(cfg.seed, replicate);
    let pc = ProcessConfig::new(n, cfg.class, stop_rule(cfg.mode, n, c), seed).with_er(cfg.track_er);
    let outcome = run(&pc)
        .map(|tr| Outcome {
            t: tr.last.t,
            m: tr.last.m,
            r: tr.last.r,
            giant: tr.last.giant,
        })
        .map_err(|e| e.to_string());
    ReplicateRow {
        n,
        c,
        replicate,
        seed,
        outcome,
    }
}

/// Every replicate of every cell, ordered by cell then replicate.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ReplicateRow>, HarnessError> {
    cfg.validate()?;
    let tasks: Vec<(usize, f64, usize)> = cfg
        .cells()
        .into_iter()
        .flat_map(|(n, c)| (0..cfg.replicates).map(move |j| (n, c, j)))
        .collect();
    parallel_map(cfg.jobs, &tasks, |&(n, c, j)| run_replicate(cfg, n, c, j))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
}

impl Stats {
    /// Sample statistics; `std` uses `len - 1` and quantiles interpolate
    /// linearly between order statistics. All NaN when `values` is empty.
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats {
                mean: f64::NAN,
                std: f64::NAN,
                q10: f64::NAN,
                q50: f64::NAN,
                q90: f64::NAN,
            };
        }
        let len = values.len() as f64;
        let mean = values.iter().sum::<f64>() / len;
        let std = if values.len() > 1 {
            (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (len - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Stats {
            mean,
            std,
            q10: quantile(&sorted, 0.1),
            q50: quantile(&sorted, 0.5),
            q90: quantile(&sorted, 0.9),
        }
    }
}

/// Quantile of sorted data with linear interpolation.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub n: usize,
    pub c: f64,
    pub replicates: usize,
    pub failures: usize,
    pub t: Stats,
    pub m: Stats,
    pub r: Stats,
    pub giant: Stats,
}

pub const SWEEP_HEADER: &str = "class,mode,n,c,replicates,failures,\
t_mean,t_std,t_q10,t_q50,t_q90,\
m_mean,m_std,m_q10,m_q50,m_q90,\
r_mean,r_std,r_q10,r_q50,r_q90,\
giant_mean,giant_std,giant_q10,giant_q50,giant_q90";

/// Group consecutive rows of the same cell and summarise each group.
pub fn aggregate(rows: &[ReplicateRow]) -> Vec<CellSummary> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let (n, c) = (rows[start].n, rows[start].c);
        let mut end = start;
        while end < rows.len() && rows[end].n == n && rows[end].c == c {
            end += 1;
        }
        let ok: Vec<Outcome> = rows[start..end].iter().filter_map(|r| r.outcome.clone().ok()).collect();
        let col = |f: fn(&Outcome) -> f64| Stats::of(&ok.iter().map(f).collect::<Vec<_>>());
        out.push(CellSummary {
            n,
            c,
            replicates: end - start,
            failures: end - start - ok.len(),
            t: col(|o| o.t as f64),
            m: col(|o| o.m as f64),
            r: col(|o| o.r as f64),
            giant: col(|o| o.giant as f64),
        });
        start = end;
    }
    out
}

pub fn write_replicates<W: Write>(
    cfg: &SweepConfig,
    rows: &[ReplicateRow],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{REPLICATE_HEADER}")?;
    for r in rows {
        let prefix = format!("{},{},{},{},{},{}", cfg.class, cfg.mode, r.n, r.c, r.replicate, r.seed);
        match &r.outcome {
            Ok(o) => writeln!(out, "{prefix},{},{},{},{},", o.t, o.m, o.r, o.giant)?,
            Err(e) => writeln!(out, "{prefix},,,,,{}", e.replace(',', ";"))?,
        }
    }
    Ok(())
}

pub fn write_summary<W: Write>(
    cfg: &SweepConfig,
    cells: &[CellSummary],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for s in cells {
        write!(out, "{},{},{},{},{},{}", cfg.class, cfg.mode, s.n, s.c, s.replicates, s.failures)?;
        for st in [s.t, s.m, s.r, s.giant] {
            write!(out, ",{},{},{},{},{}", st.mean, st.std, st.q10, st.q50, st.q90)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_small_sample() {
        let s = Stats::of(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(s.q50, 2.5);
        assert!((s.q10 - 1.3).abs() < 1e-12);
        assert!((s.q90 - 3.7).abs() < 1e-12);
        let one = Stats::of(&[7.0]);
        assert_eq!((one.std, one.q10, one.q90), (0.0, 7.0, 7.0));
        assert!(Stats::of(&[]).mean.is_nan());
    }

    #[test]
    fn failed_replicates_are_counted_not_fatal() {
        let cfg = SweepConfig {
            ns: vec![4],
            cs: vec![2.0, 4.0],
            mode: SweepMode::Accepted,
            replicates: 3,
            seed: 5,
            class: GraphClass::Cactus,
            jobs: 1,
            track_er: false,
        };
        // 8 edges exceed the cactus cap on 4 vertices
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 6);
        let cells = aggregate(&rows);
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[1].failures, 3);
        assert!(cells[1].m.mean.is_nan());
        assert!(rows[3].outcome.as_ref().unwrap_err().contains("cannot accept"));
    }
}
