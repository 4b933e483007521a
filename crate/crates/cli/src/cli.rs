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


//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use cgproc::analytic::{predictions, MIN_DENSITY};
use cgproc::process::{
    classify_queries, count_forbidden_addable, pair_count, run, Checkpoints, ProcessConfig, StopRule,
    CENSUS_HEADER, CLASSIFICATION_HEADER, TRACE_HEADER,
};
use cgproc::structure::replay_decomposition;
use cgproc::{ClassOracle, Graph, GraphClass};

use crate::pool::{default_jobs, parallel_map, replicate_seed};
use crate::sweep::{aggregate, half_n_scaled, run_sweep, write_replicates, write_summary, SweepConfig, SweepMode};
use crate::verify::{all_passed, run_verify, write_report, VerifyConfig};
use crate::HarnessError;

pub const ANALYTIC_HEADER: &str =
    "c,beta,f,f_prime,rejected_per_vertex,rejected_fraction,forbidden_density,giant_fraction,uniform_giant_fraction";

/// Largest `n` the forbidden-pair census accepts unless `--cap` says otherwise.
pub const DEFAULT_CENSUS_CAP: usize = 4000;

#[derive(Debug, Parser)]
#[command(name = "cgproc", version, about = "Constrained random graph process for minor-closed classes")]
pub struct Cli {
    /// Master seed; replicate seeds are derived from it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// cactus, outerplanar, series-parallel, planar or none.
    #[arg(long, global = true, value_parser = parse_class)]
    pub class: Option<GraphClass>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_class(s: &str) -> Result<GraphClass, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form predictions on a grid of c.
    Analytic(AnalyticArgs),
    /// One run of the process, one CSV row per checkpoint.
    Run(RunArgs),
    /// Replicated runs over an n x c grid, summarised per cell.
    Sweep(SweepArgs),
    /// Forbidden/addable census of process graphs.
    Forbidden(ForbiddenArgs),
    /// Accept/reject counts split by giant membership over a step window.
    Classify(ClassifyArgs),
    /// Weighted decomposition of the 2-core of the largest component.
    Decompose(DecomposeArgs),
    /// Deterministic invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, default_value_t = 1.01)]
    pub c_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub c_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("stop").required(true)))]
pub struct RunArgs {
    #[arg(long)]
    pub n: usize,
    /// Stop after this many queries.
    #[arg(long, group = "stop")]
    pub t: Option<u64>,
    /// Stop after `c n / 2` queries.
    #[arg(long, group = "stop")]
    pub c: Option<f64>,
    /// Stop once this many edges are accepted.
    #[arg(long, group = "stop")]
    pub accepted: Option<usize>,
    /// Query every pair.
    #[arg(long, group = "stop")]
    pub all: bool,
    /// Checkpoints: query counts, or accepted counts with --accepted.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Checkpoint every k queries (k accepted edges with --accepted).
    #[arg(long)]
    pub every: Option<u64>,
    /// Track the unconstrained graph on the same stream.
    #[arg(long)]
    pub track_er: bool,
    /// Write the final graph as an edge list.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SweepMode::Steps)]
    pub mode: SweepMode,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long)]
    pub track_er: bool,
    /// Also write one row per replicate.
    #[arg(long)]
    pub replicates_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("when").required(true)))]
pub struct ForbiddenArgs {
    #[arg(long)]
    pub n: usize,
    /// Census after these query counts.
    #[arg(long, value_delimiter = ',', group = "when")]
    pub t: Vec<u64>,
    /// Census after `c n / 2` queries for each c.
    #[arg(long, value_delimiter = ',', group = "when")]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: usize,
    /// First query of the window (1-based).
    #[arg(long)]
    pub t_lo: u64,
    /// Last query of the window.
    #[arg(long)]
    pub t_hi: u64,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Edge list to decompose; otherwise a process graph is simulated.
    #[arg(long, conflicts_with_all = ["n", "t"])]
    pub graph: Option<PathBuf>,
    #[arg(long, required_unless_present = "graph")]
    pub n: Option<usize>,
    /// Queries to simulate; defaults to `n/2 + n^0.8`.
    #[arg(long)]
    pub t: Option<u64>,
    /// Lower bound on part weight.
    #[arg(long)]
    pub a: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [200usize, 2000])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 6)]
    pub oracle_max_n: usize,
    #[arg(long, default_value_t = 5)]
    pub axiom_max_n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub decompositions: usize,
    #[arg(long, default_value_t = 1_000)]
    pub turan_samples: usize,
    #[arg(long, default_value_t = 7)]
    pub turan_max_n: usize,
}

/// Parse, execute and map the outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("cgproc: {e}");
            e.exit_code()
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn execute(cli: &Cli) -> Result<(), HarnessError> {
    let jobs = cli.jobs.unwrap_or_else(default_jobs);
    if jobs == 0 {
        return Err(HarnessError::Config("--jobs must be at least 1".into()));
    }
    let class = cli.class.unwrap_or(GraphClass::Planar);
    match &cli.command {
        Command::Analytic(a) => cmd_analytic(a, &cli.out),
        Command::Run(a) => cmd_run(a, class, cli.seed, &cli.out),
        Command::Sweep(a) => cmd_sweep(a, class, cli.seed, jobs, &cli.out),
        Command::Forbidden(a) => cmd_forbidden(a, class, cli.seed, jobs, &cli.out),
        Command::Classify(a) => cmd_classify(a, class, cli.seed, jobs, &cli.out),
        Command::Decompose(a) => cmd_decompose(a, class, cli.seed, &cli.out),
        Command::Verify(a) => cmd_verify(a, cli.class, cli.seed, jobs, &cli.out),
    }
}

/// Grid points `c_min + k * step` up to `c_max`.
pub fn analytic_grid(c_min: f64, c_max: f64, step: f64) -> Result<Vec<f64>, HarnessError> {
    if !(c_min > 1.0 && c_min < c_max && c_max.is_finite()) {
        return Err(HarnessError::Config(format!("need 1 < c_min < c_max, got {c_min} and {c_max}")));
    }
    if !(step > 0.0) {
        return Err(HarnessError::Config(format!("step {step} must be positive")));
    }
    let count = ((c_max - c_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| c_min + k as f64 * step).collect())
}

pub fn cmd_analytic(a: &AnalyticArgs, out: &Option<PathBuf>) -> Result<(), HarnessError> {
    let grid = analytic_grid(a.c_min, a.c_max, a.step)?;
    let mut w = open_out(out)?;
    writeln!(w, "{ANALYTIC_HEADER}")?;
    for c in grid {
        let p = predictions(c).map_err(|e| HarnessError::Config(e.to_string()))?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            p.c,
            p.beta,
            p.f,
            p.f_prime,
            p.rejected_per_vertex,
            p.rejected_fraction,
            p.forbidden_density,
            p.giant_fraction_process,
            p.uniform_giant_fraction
        )?;
    }
    w.flush()?;
    Ok(())
}

fn run_config(a: &RunArgs, class: GraphClass, seed: u64) -> Result<ProcessConfig, HarnessError> {
    let stop = match (a.t, a.c, a.accepted, a.all) {
        (Some(t), ..) => StopRule::AtStep(t),
        (_, Some(c), ..) => StopRule::AtStep(half_n_scaled(a.n, c)),
        (_, _, Some(m0), _) => StopRule::AtAccepted(m0),
        (.., true) => StopRule::AllQueried,
        _ => return Err(HarnessError::Config("give one of --t, --c, --accepted or --all".into())),
    };
    let mut marks = a.checkpoints.clone();
    if let Some(k) = a.every {
        if k == 0 {
            return Err(HarnessError::Config("--every must be positive".into()));
        }
        let end = match stop {
            StopRule::AtStep(t) => t,
            StopRule::AtAccepted(m0) => m0 as u64,
            StopRule::AllQueried => pair_count(a.n),
        };
        marks.extend((1..=end / k).map(|i| i * k));
    }
    marks.sort_unstable();
    marks.dedup();
    let checkpoints = match stop {
        StopRule::AtAccepted(_) => Checkpoints::Accepted(marks.into_iter().map(|m| m as usize).collect()),
        _ => Checkpoints::Steps(marks),
    };
    let cfg = ProcessConfig::new(a.n, class, stop, seed)
        .with_checkpoints(checkpoints)
        .with_er(a.track_er);
    cfg.validate()?;
    Ok(cfg)
}

pub fn cmd_run(a: &RunArgs, class: GraphClass, seed: u64, out: &Option<PathBuf>) -> Result<(), HarnessError> {
    let cfg = run_config(a, class, seed)?;
    let trace = run(&cfg)?;
    let mut w = open_out(out)?;
    writeln!(w, "{TRACE_HEADER}")?;
    trace.write_csv(&mut w)?;
    w.flush()?;
    if let Some(p) = &a.dump {
        let mut d = BufWriter::new(File::create(p)?);
        trace.graph.write_edge_list(&mut d)?;
        d.flush()?;
    }
    Ok(())
}

pub fn cmd_sweep(
    a: &SweepArgs,
    class: GraphClass,
    seed: u64,
    jobs: usize,
    out: &Option<PathBuf>,
) -> Result<(), HarnessError> {
    let cfg = SweepConfig {
        ns: a.n.clone(),
        cs: a.c.clone(),
        mode: a.mode,
        replicates: a.replicates,
        seed,
        class,
        jobs,
        track_er: a.track_er,
    };
    let rows = run_sweep(&cfg)?;
    let cells = aggregate(&rows);
    let mut w = open_out(out)?;
    write_summary(&cfg, &cells, &mut w)?;
    w.flush()?;
    if let Some(p) = &a.replicates_out {
        let mut r = BufWriter::new(File::create(p)?);
        write_replicates(&cfg, &rows, &mut r)?;
        r.flush()?;
    }
    let mut invariant = None;
    for r in &rows {
        if let Err(e) = &r.outcome {
            eprintln!("cgproc: n={} c={} replicate {}: {e}", r.n, r.c, r.replicate);
            if e.starts_with("invariant violated") {
                invariant.get_or_insert_with(|| e.clone());
            }
        }
    }
    match invariant {
        Some(e) => Err(HarnessError::Invariant(e)),
        None => Ok(()),
    }
}

pub fn cmd_forbidden(
    a: &ForbiddenArgs,
    class: GraphClass,
    seed: u64,
    jobs: usize,
    out: &Option<PathBuf>,
) -> Result<(), HarnessError> {
    if a.n > a.cap {
        return Err(HarnessError::Config(format!(
            "the census is quadratic; n = {} is above the cap {} (raise --cap)",
            a.n, a.cap
        )));
    }
    if a.replicates == 0 {
        return Err(HarnessError::Config("replicates must be at least 1".into()));
    }
    let mut ts: Vec<u64> = if a.t.is_empty() {
        a.c.iter().map(|&c| half_n_scaled(a.n, c)).collect()
    } else {
        a.t.clone()
    };
    ts.sort_unstable();
    ts.dedup();
    let t_end = *ts.last().expect("clap requires --t or --c");
    let base = ProcessConfig::new(a.n, class, StopRule::AtStep(t_end), seed).with_checkpoints(Checkpoints::Steps(ts.clone()));
    base.validate()?;
    let reps: Vec<usize> = (0..a.replicates).collect();
    let results = parallel_map(jobs, &reps, |&j| -> Result<Vec<String>, HarnessError> {
        let mut cfg = base.clone();
        cfg.seed = replicate_seed(seed, j);
        cfg.snapshot_cap = cfg.snapshot_cap.max(a.n);
        let trace = run(&cfg)?;
        let oracle = ClassOracle::new(class);
        Ok(trace
            .records
            .iter()
            .map(|rec| {
                let g = rec.snapshot.as_ref().expect("snapshots kept below the cap");
                let census = count_forbidden_addable(g, &oracle);
                format!(
                    "{},{},{},{},{},{},{}",
                    cfg.seed, class, a.n, rec.t, census.forbidden, census.addable, census.m
                )
            })
            .collect())
    })?;
    let mut w = open_out(out)?;
    writeln!(w, "{CENSUS_HEADER}")?;
    for r in results {
        for line in r? {
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    for &t in &ts {
        let c = 2.0 * t as f64 / a.n as f64;
        if c >= MIN_DENSITY {
            if let Ok(p) = predictions(c) {
                eprintln!("t={t} c={c}: predicted forbidden/(n^2/2) = {}", p.forbidden_density);
            }
        }
    }
    Ok(())
}

pub fn cmd_classify(
    a: &ClassifyArgs,
    class: GraphClass,
    seed: u64,
    jobs: usize,
    out: &Option<PathBuf>,
) -> Result<(), HarnessError> {
    if a.replicates == 0 {
        return Err(HarnessError::Config("replicates must be at least 1".into()));
    }
    let base = ProcessConfig::new(a.n, class, StopRule::AtStep(a.t_hi), seed);
    base.validate()?;
    let reps: Vec<usize> = (0..a.replicates).collect();
    let tables = parallel_map(jobs, &reps, |&j| {
        let mut cfg = base.clone();
        cfg.seed = replicate_seed(seed, j);
        classify_queries(&cfg, a.t_lo, a.t_hi).map(|t| (cfg.seed, t))
    })?;
    let mut w = open_out(out)?;
    writeln!(w, "{CLASSIFICATION_HEADER}")?;
    for res in tables {
        let (s, t) = res?;
        writeln!(
            w,
            "{s},{class},{},{},{},{},{},{},{}",
            a.n, t.t_lo, t.t_hi, t.inside_rejected, t.inside_accepted, t.outside_rejected, t.outside_accepted
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Default replay point `n/2 + n^0.8`, inside the supercritical window.
pub fn default_replay_step(n: usize) -> u64 {
    (n as f64 / 2.0 + (n as f64).powf(0.8)).round() as u64
}

pub fn cmd_decompose(
    a: &DecomposeArgs,
    class: GraphClass,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<(), HarnessError> {
    let g: Graph = match (&a.graph, a.n) {
        (Some(p), _) => Graph::read_edge_list(BufReader::new(File::open(p)?))
            .map_err(|e| HarnessError::Config(e.to_string()))?,
        (None, Some(n)) => {
            let t = a.t.unwrap_or_else(|| default_replay_step(n)).min(pair_count(n));
            let cfg = ProcessConfig::new(n, class, StopRule::AtStep(t), seed);
            cfg.validate()?;
            run(&cfg)?.graph
        }
        (None, None) => return Err(HarnessError::Config("give --graph or --n".into())),
    };
    let replay = replay_decomposition(&g, a.a).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut w = open_out(out)?;
    for part in &replay.decomposition.parts {
        let line: Vec<String> = part.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()?;
    eprintln!(
        "giant {} core {} W {} M {} max degree {} a {}: {} parts, leftover {}",
        replay.giant_size,
        replay.core_vertices.len(),
        replay.total_weight,
        replay.max_weight,
        replay.max_degree,
        replay.a,
        replay.decomposition.parts.len(),
        replay.decomposition.leftover
    );
    replay.well_formed.map_err(HarnessError::Invariant)
}

pub fn cmd_verify(
    a: &VerifyArgs,
    class: Option<GraphClass>,
    seed: u64,
    jobs: usize,
    out: &Option<PathBuf>,
) -> Result<(), HarnessError> {
    let mut cfg = VerifyConfig::new(seed, jobs);
    cfg.ns = a.n.clone();
    if let Some(c) = class {
        cfg.classes = vec![c];
    }
    cfg.oracle_max_n = a.oracle_max_n;
    cfg.axiom_max_n = a.axiom_max_n;
    cfg.decompositions = a.decompositions;
    cfg.turan_samples = a.turan_samples;
    cfg.turan_max_n = a.turan_max_n;
    let results = run_verify(&cfg)?;
    let mut w = open_out(out)?;
    write_report(&results, &mut w)?;
    w.flush()?;
    if all_passed(&results) {
        Ok(())
    } else {
        Err(HarnessError::Invariant("verification failed".into()))
    }
}
