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

//! The constrained random graph process.
//!
//! Vertices are `0..n` in memory; files written by the harness use the
//! 1-based labels of the edge-list format.

pub mod engine;
pub mod kernel;
pub mod stream;

use std::collections::HashSet;
use std::io::Write;

use rand::Rng;

use crate::constraints::{ConstraintOracle, GraphClass};
use crate::error::ProcessError;
use crate::graph::{ComponentTracker, Graph};

pub use engine::{Engine, EngineStats, ErShadow};
pub use stream::{pair_count, rng_from_seed, split_seed, EdgeStream, StreamMode};

/// Largest `n` for which checkpoints keep a copy of the graph by default.
pub const DEFAULT_SNAPSHOT_CAP: usize = 10_000;

/// Largest `n` for which checkpoints re-test membership from scratch by
/// default.
pub const DEFAULT_VERIFY_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Stop after `t` queries.
    AtStep(u64),
    /// Stop at the query that brings the accepted count to `m0`.
    AtAccepted(usize),
    /// Query every pair.
    AllQueried,
}

/// Moments at which the trace records a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Checkpoints {
    /// After the given numbers of queries.
    Steps(Vec<u64>),
    /// When the accepted count first reaches each value.
    Accepted(Vec<usize>),
}

impl Default for Checkpoints {
    fn default() -> Self {
        Checkpoints::Steps(Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessConfig {
    pub n: usize,
    pub class: GraphClass,
    pub stop: StopRule,
    pub seed: u64,
    pub checkpoints: Checkpoints,
    /// Run the unconstrained graph on the same stream and check the
    /// rejection and partition invariants against it.
    pub track_er: bool,
    pub snapshot_cap: usize,
    pub verify_membership: bool,
}

impl ProcessConfig {
    pub fn new(n: usize, class: GraphClass, stop: StopRule, seed: u64) -> Self {
        ProcessConfig {
            n,
            class,
            stop,
            seed,
            checkpoints: Checkpoints::default(),
            track_er: false,
            snapshot_cap: DEFAULT_SNAPSHOT_CAP,
            verify_membership: n <= DEFAULT_VERIFY_LIMIT,
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Checkpoints) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_er(mut self, track_er: bool) -> Self {
        self.track_er = track_er;
        self
    }

    pub fn validate(&self) -> Result<(), ProcessError> {
        if self.n == 0 {
            return Err(ProcessError::InvalidConfig("n must be at least 1".into()));
        }
        if self.n > u32::MAX as usize / 2 {
            return Err(ProcessError::InvalidConfig(format!("n = {} is too large", self.n)));
        }
        let pairs = pair_count(self.n);
        match self.stop {
            StopRule::AtStep(t) if t > pairs => {
                return Err(ProcessError::StepOutOfRange { t, pairs })
            }
            StopRule::AtAccepted(m0) => self.check_feasible(m0)?,
            _ => {}
        }
        let sorted = match &self.checkpoints {
            Checkpoints::Steps(ts) => {
                if let Some(&t) = ts.iter().find(|&&t| t > pairs) {
                    return Err(ProcessError::StepOutOfRange { t, pairs });
                }
                ts.windows(2).all(|w| w[0] <= w[1])
            }
            Checkpoints::Accepted(ms) => {
                if let Some(&m) = ms.iter().max() {
                    self.check_feasible(m)?;
                }
                ms.windows(2).all(|w| w[0] <= w[1])
            }
        };
        if !sorted {
            return Err(ProcessError::InvalidConfig(
                "checkpoints must be sorted ascending".into(),
            ));
        }
        Ok(())
    }

    fn check_feasible(&self, m0: usize) -> Result<(), ProcessError> {
        if m0 as u64 > self.class.max_edges(self.n) {
            return Err(ProcessError::InfeasibleStop {
                m0,
                n: self.n,
                class: self.class.name().to_string(),
            });
        }
        Ok(())
    }

    /// Lazy sampling unless the run is expected to use more than half of
    /// all pairs.
    pub fn stream_mode(&self) -> StreamMode {
        let pairs = pair_count(self.n);
        match self.stop {
            StopRule::AtStep(t) if 2 * t <= pairs => StreamMode::Lazy,
            StopRule::AtAccepted(_) => StreamMode::Lazy,
            _ => StreamMode::Permutation,
        }
    }

    pub fn stream(&self) -> EdgeStream {
        EdgeStream::new(self.n, self.seed, self.stream_mode())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub t: u64,
    pub m: usize,
    pub r: u64,
    pub giant: usize,
    pub er_excess: Option<usize>,
    pub snapshot: Option<Graph>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessTrace {
    pub seed: u64,
    pub class: GraphClass,
    pub n: usize,
    pub records: Vec<TraceRecord>,
    /// State when the run stopped (no snapshot; see `graph`).
    pub last: TraceRecord,
    /// Queries needed to reach the accepted target, for `AtAccepted`.
    pub steps_to_accept: Option<u64>,
    /// The process graph when the run stopped.
    pub graph: Graph,
    pub stats: EngineStats,
}

pub const TRACE_HEADER: &str = "seed,class,n,t,m,r,giant,er_excess";

impl ProcessTrace {
    /// One row per checkpoint, then the final state unless it coincides
    /// with the last checkpoint.
    pub fn rows(&self) -> Vec<&TraceRecord> {
        let mut rows: Vec<&TraceRecord> = self.records.iter().collect();
        if self.records.last().map(|r| r.t) != Some(self.last.t) {
            rows.push(&self.last);
        }
        rows
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in self.rows() {
            let er = r.er_excess.map(|x| x.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                self.seed, self.class, self.n, r.t, r.m, r.r, r.giant, er
            )?;
        }
        Ok(())
    }
}

struct Checker<'a> {
    cfg: &'a ProcessConfig,
    next: usize,
}

impl Checker<'_> {
    fn due(&self, engine: &Engine) -> bool {
        match &self.cfg.checkpoints {
            Checkpoints::Steps(ts) => ts.get(self.next) == Some(&engine.queried()),
            Checkpoints::Accepted(ms) => ms.get(self.next) == Some(&engine.accepted()),
        }
    }

    fn record_all(&mut self, engine: &Engine, out: &mut Vec<TraceRecord>) -> Result<(), ProcessError> {
        while self.due(engine) {
            self.next += 1;
            check_partition(engine)?;
            if self.cfg.verify_membership && !engine.class().contains(engine.graph()) {
                return Err(ProcessError::Invariant {
                    t: engine.queried(),
                    what: "process graph left the class".into(),
                });
            }
            let mut rec = record(engine);
            if self.cfg.n <= self.cfg.snapshot_cap {
                rec.snapshot = Some(engine.graph().clone());
            }
            out.push(rec);
        }
        Ok(())
    }
}

fn record(engine: &Engine) -> TraceRecord {
    TraceRecord {
        t: engine.queried(),
        m: engine.accepted(),
        r: engine.rejected(),
        giant: engine.giant_size(),
        er_excess: engine.er().map(|e| e.excess()),
        snapshot: None,
    }
}

/// Components of the process graph and of the unconstrained graph agree.
fn check_partition(engine: &Engine) -> Result<(), ProcessError> {
    if let Some(er) = engine.er() {
        if engine.tracker().canonical_labels() != er.tracker().canonical_labels() {
            return Err(ProcessError::Invariant {
                t: engine.queried(),
                what: "component partition differs from the unconstrained graph".into(),
            });
        }
    }
    Ok(())
}

/// Rejections never exceed the excess of the unconstrained graph.
fn check_rejections(engine: &Engine) -> Result<(), ProcessError> {
    if let Some(er) = engine.er() {
        if engine.rejected() > er.excess() as u64 {
            return Err(ProcessError::Invariant {
                t: engine.queried(),
                what: format!(
                    "{} rejections exceed unconstrained excess {}",
                    engine.rejected(),
                    er.excess()
                ),
            });
        }
    }
    Ok(())
}

/// Run the process described by `cfg`.
pub fn run(cfg: &ProcessConfig) -> Result<ProcessTrace, ProcessError> {
    run_observed(cfg, |_, _, _, _| {})
}

/// Like [`run`], calling `observe(engine, u, v, accepted)` after every
/// decision, before the edge is applied.
fn run_observed<F>(cfg: &ProcessConfig, mut observe: F) -> Result<ProcessTrace, ProcessError>
where
    F: FnMut(&Engine, usize, usize, bool),
{
    cfg.validate()?;
    let mut engine = Engine::new(cfg.n, cfg.class, cfg.track_er);
    let mut stream = cfg.stream();
    let mut checker = Checker { cfg, next: 0 };
    let mut records = Vec::new();
    checker.record_all(&engine, &mut records)?;
    let mut steps_to_accept = None;
    loop {
        let done = match cfg.stop {
            StopRule::AtStep(t) => engine.queried() >= t,
            StopRule::AtAccepted(m0) => engine.accepted() >= m0,
            StopRule::AllQueried => false,
        };
        if done {
            break;
        }
        let Some((u, v)) = stream.next() else {
            if let StopRule::AtAccepted(_) = cfg.stop {
                return Err(ProcessError::Saturated {
                    accepted: engine.accepted(),
                });
            }
            break;
        };
        let accept = engine.decide(u, v);
        observe(&engine, u, v, accept);
        engine.apply(u, v, accept);
        check_rejections(&engine)?;
        checker.record_all(&engine, &mut records)?;
    }
    if let StopRule::AtAccepted(_) = cfg.stop {
        steps_to_accept = Some(engine.queried());
    }
    check_partition(&engine)?;
    Ok(ProcessTrace {
        seed: cfg.seed,
        class: cfg.class,
        n: cfg.n,
        last: record(&engine),
        records,
        steps_to_accept,
        stats: engine.stats(),
        graph: engine.graph().clone(),
    })
}

/// Number of queries until `m0` edges have been accepted; `cfg.stop` is
/// replaced by `AtAccepted(m0)`.
pub fn steps_until_accepted(cfg: &ProcessConfig, m0: usize) -> Result<u64, ProcessError> {
    let mut cfg = cfg.clone();
    cfg.stop = StopRule::AtAccepted(m0);
    Ok(run(&cfg)?.steps_to_accept.unwrap_or(0))
}

/// Add `m0` edges, each chosen uniformly among the edges addable at that
/// moment.
///
/// Forbidden non-edges stay forbidden as the graph grows, so rejected
/// candidates are remembered and never drawn again. Once most pairs are
/// known the candidates are listed explicitly.
pub fn random_greedy(
    n: usize,
    class: GraphClass,
    m0: usize,
    seed: u64,
) -> Result<Graph, ProcessError> {
    let probe = ProcessConfig::new(n, class, StopRule::AtAccepted(m0), seed);
    probe.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut engine = Engine::new(n, class, false);
    let pairs = pair_count(n);
    let key = |u: usize, v: usize| (u as u64) * n as u64 + v as u64;
    let mut forbidden: HashSet<u64> = HashSet::new();
    let mut candidates: Option<Vec<(usize, usize)>> = None;
    while engine.accepted() < m0 {
        let known = engine.accepted() as u64 + forbidden.len() as u64;
        if known == pairs {
            return Err(ProcessError::Saturated {
                accepted: engine.accepted(),
            });
        }
        let (u, v) = match &mut candidates {
            Some(list) => list[rng.gen_range(0..list.len())],
            None if 2 * known > pairs => {
                let g = engine.graph();
                let mut list = Vec::with_capacity((pairs - known) as usize);
                for u in 0..n {
                    for v in u + 1..n {
                        if !g.has_edge(u, v) && !forbidden.contains(&key(u, v)) {
                            list.push((u, v));
                        }
                    }
                }
                candidates = Some(list);
                continue;
            }
            None => {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let (u, v) = (a.min(b), a.max(b));
                if engine.graph().has_edge(u, v) || forbidden.contains(&key(u, v)) {
                    continue;
                }
                (u, v)
            }
        };
        let accept = engine.decide(u, v);
        if accept {
            engine.accept(u, v);
        } else {
            forbidden.insert(key(u, v));
        }
        if let Some(list) = &mut candidates {
            let i = list.iter().position(|&p| p == (u, v)).unwrap();
            list.swap_remove(i);
        }
    }
    Ok(engine.graph().clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub forbidden: u64,
    pub addable: u64,
    pub m: usize,
}

pub const CENSUS_HEADER: &str = "seed,class,n,t,forbidden,addable,m";

/// Split the non-edges of `g` (assumed in the class) into forbidden and
/// addable ones.
///
/// Pairs across components and pairs inside tree components are addable
/// without asking the oracle. Built-in classes with shortcuts go through
/// the incremental engine, which asks one question per pair of 2-core
/// vertices.
pub fn count_forbidden_addable(g: &Graph, oracle: &dyn ConstraintOracle) -> Census {
    let n = g.n();
    let non_edges = pair_count(n) - g.m() as u64;
    let forbidden = if oracle.is_trivial() {
        0
    } else if let Some(class) = oracle.builtin_class() {
        Engine::from_graph(g, class).count_forbidden()
    } else {
        let tracker = ComponentTracker::from_graph(g);
        let (labels, count) = g.components();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for v in 0..n {
            members[labels[v]].push(v);
        }
        let mut forbidden = 0;
        for comp in members.iter().filter(|c| !tracker.is_tree_component(c[0])) {
            for (i, &u) in comp.iter().enumerate() {
                for &v in &comp[i + 1..] {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    if !oracle.allows(g, &tracker, u, v).expect("valid non-edge") {
                        forbidden += 1;
                    }
                }
            }
        }
        forbidden
    };
    Census {
        forbidden,
        addable: non_edges - forbidden,
        m: g.m(),
    }
}

/// Queries in a step window split by whether both endpoints lay in the
/// largest component at query time and by the decision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Classification {
    pub t_lo: u64,
    pub t_hi: u64,
    pub inside_rejected: u64,
    pub inside_accepted: u64,
    pub outside_rejected: u64,
    pub outside_accepted: u64,
}

pub const CLASSIFICATION_HEADER: &str =
    "seed,class,n,t_lo,t_hi,inside_rejected,inside_accepted,outside_rejected,outside_accepted";

impl Classification {
    pub fn inside(&self) -> u64 {
        self.inside_rejected + self.inside_accepted
    }

    pub fn outside(&self) -> u64 {
        self.outside_rejected + self.outside_accepted
    }
}

/// Tabulate the queries with index in `t_lo..=t_hi` (1-based) of the run
/// described by `cfg`, whose stop rule is replaced by `AtStep(t_hi)`.
pub fn classify_queries(
    cfg: &ProcessConfig,
    t_lo: u64,
    t_hi: u64,
) -> Result<Classification, ProcessError> {
    if t_lo == 0 || t_lo > t_hi {
        return Err(ProcessError::InvalidConfig(format!(
            "window {t_lo}..={t_hi} is not a step range"
        )));
    }
    let mut cfg = cfg.clone();
    cfg.stop = StopRule::AtStep(t_hi);
    let mut table = Classification {
        t_lo,
        t_hi,
        ..Default::default()
    };
    run_observed(&cfg, |engine, u, v, accepted| {
        let t = engine.queried() + 1;
        if t < t_lo {
            return;
        }
        let inside = engine.in_giant(u) && engine.in_giant(v);
        let slot = match (inside, accepted) {
            (true, false) => &mut table.inside_rejected,
            (true, true) => &mut table.inside_accepted,
            (false, false) => &mut table.outside_rejected,
            (false, true) => &mut table.outside_accepted,
        };
        *slot += 1;
    })?;
    Ok(table)
}
