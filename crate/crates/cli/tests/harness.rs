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


use std::fs;
use std::path::Path;

use cgproc::graph::Graph;
use cgproc::process::{CENSUS_HEADER, CLASSIFICATION_HEADER, TRACE_HEADER};
use cgproc::{ComponentTracker, ConstraintOracle, GraphError};
use cgproc_cli::cli::{main_with_args, ANALYTIC_HEADER};
use cgproc_cli::sweep::{aggregate, run_sweep, write_summary, SWEEP_HEADER};
use cgproc_cli::verify::axiom_suite;
use cgproc_cli::{Status, SweepConfig, SweepMode};
use tempfile::TempDir;

fn cgproc(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("cgproc").chain(args.iter().copied()))
}

fn run_to(dir: &TempDir, name: &str, args: &[&str]) -> (i32, String) {
    let path = dir.path().join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_owned();
    full.extend(["--out", &p]);
    let code = cgproc(&full);
    (code, fs::read_to_string(&path).unwrap_or_default())
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn header(csv: &str) -> &str {
    csv.lines().next().unwrap_or("")
}

#[test]
fn headers_match_the_published_columns() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(&dir, "a.csv", &["analytic", "--c-min", "1.5", "--c-max", "2"]);
    assert_eq!((code, header(&out)), (0, ANALYTIC_HEADER));
    let (code, out) = run_to(&dir, "r.csv", &["run", "--n", "50", "--t", "40", "--every", "10"]);
    assert_eq!((code, header(&out)), (0, TRACE_HEADER));
    let (code, out) = run_to(&dir, "s.csv", &["sweep", "--n", "40", "--c", "1,2", "--replicates", "3"]);
    assert_eq!((code, header(&out)), (0, SWEEP_HEADER));
    let (code, out) = run_to(&dir, "f.csv", &["forbidden", "--n", "30", "--t", "20"]);
    assert_eq!((code, header(&out)), (0, CENSUS_HEADER));
    let (code, out) = run_to(&dir, "c.csv", &["classify", "--n", "40", "--t-lo", "10", "--t-hi", "30"]);
    assert_eq!((code, header(&out)), (0, CLASSIFICATION_HEADER));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run_to(&dir, "ok.csv", &["run", "--n", "20", "--t", "10"]).0, 0);
    // configuration problems
    assert_eq!(cgproc(&["run", "--n", "20"]), 2);
    assert_eq!(cgproc(&["run", "--n", "20", "--t", "10", "--class", "toroidal"]), 2);
    assert_eq!(cgproc(&["analytic", "--c-min", "0.5"]), 2);
    assert_eq!(cgproc(&["run", "--n", "20", "--t", "10", "--jobs", "0"]), 2);
    assert_eq!(cgproc(&["forbidden", "--n", "5000", "--t", "10"]), 2);
    assert_eq!(cgproc(&["run", "--n", "6", "--accepted", "9", "--class", "cactus"]), 2);
    let missing = dir.path().join("missing.txt");
    assert_eq!(cgproc(&["decompose", "--graph", missing.to_str().unwrap(), "--a", "2"]), 2);
    let (code, report) = run_to(
        &dir,
        "v.txt",
        &["verify", "--class", "outerplanar", "--n", "60", "--decompositions", "20", "--turan-samples", "20", "--turan-max-n", "5"],
    );
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("PASS") && !report.contains("FAIL"));
}

#[test]
fn trace_rows_respect_the_excess_bound() {
    let dir = TempDir::new().unwrap();
    for class in ["cactus", "outerplanar", "series-parallel", "planar"] {
        let (code, out) = run_to(
            &dir,
            "t.csv",
            &["run", "--class", class, "--n", "300", "--c", "4", "--every", "25", "--track-er", "--seed", "9"],
        );
        assert_eq!(code, 0);
        let rs = rows(&out);
        assert!(rs.len() >= 20);
        for row in rs {
            assert_eq!(row[1], class);
            let r: u64 = row[5].parse().unwrap();
            let ex: u64 = row[7].parse().unwrap();
            assert!(r <= ex, "{class}: r {r} above the excess {ex}");
        }
    }
}

#[test]
fn unconstrained_runs_reject_nothing() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(&dir, "n.csv", &["run", "--class", "none", "--n", "200", "--c", "3", "--every", "20"]);
    assert_eq!(code, 0);
    for row in rows(&out) {
        assert_eq!(row[5], "0");
        assert_eq!(row[3], row[4], "t and m differ without a constraint");
    }
}

#[test]
fn analytic_f_is_strictly_increasing() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(&dir, "a.csv", &["analytic", "--c-min", "1.01", "--c-max", "20", "--step", "0.01"]);
    assert_eq!(code, 0);
    let col = header(&out).split(',').position(|h| h == "f").unwrap();
    let f: Vec<f64> = rows(&out).iter().map(|r| r[col].parse().unwrap()).collect();
    assert_eq!(f.len(), 1900);
    assert!(f.windows(2).all(|w| w[1] > w[0]));
    assert!(f.iter().all(|&x| x > 1.0 && x < 2.0));
}

#[test]
fn summary_equals_a_sequential_reaggregation() {
    let dir = TempDir::new().unwrap();
    let reps = dir.path().join("reps.csv");
    let (code, out) = run_to(
        &dir,
        "s.csv",
        &["sweep", "--n", "100,200", "--c", "1.5,3", "--replicates", "6", "--jobs", "3", "--seed", "4",
          "--replicates-out", reps.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    let cfg = SweepConfig {
        ns: vec![100, 200],
        cs: vec![1.5, 3.0],
        mode: SweepMode::Steps,
        replicates: 6,
        seed: 4,
        class: cgproc::GraphClass::Planar,
        jobs: 1,
        track_er: false,
    };
    let sequential = run_sweep(&cfg).unwrap();
    let mut expected = Vec::new();
    write_summary(&cfg, &aggregate(&sequential), &mut expected).unwrap();
    assert_eq!(out, String::from_utf8(expected).unwrap());
    assert_eq!(rows(&fs::read_to_string(&reps).unwrap()).len(), 24);
}

#[test]
fn dumped_graph_decomposes() {
    let dir = TempDir::new().unwrap();
    let edges = dir.path().join("g.txt");
    let e = edges.to_str().unwrap();
    assert_eq!(run_to(&dir, "r.csv", &["run", "--n", "400", "--c", "1.6", "--dump", e]).0, 0);
    let g = Graph::read_edge_list(fs::File::open(Path::new(e)).map(std::io::BufReader::new).unwrap()).unwrap();
    assert_eq!(g.n(), 400);
    let (code, parts) = run_to(&dir, "d.txt", &["decompose", "--graph", e, "--a", "3"]);
    assert_eq!(code, 0);
    for v in parts.split_whitespace() {
        let v: usize = v.parse().unwrap();
        assert!((1..=400).contains(&v));
    }
}

/// Membership by edge parity: not closed under deletion.
struct Broken;

impl ConstraintOracle for Broken {
    fn name(&self) -> String {
        "broken".into()
    }

    fn contains(&self, g: &Graph) -> bool {
        g.m() % 2 == 0
    }

    fn allows(&self, g: &Graph, _: &ComponentTracker, u: usize, v: usize) -> Result<bool, GraphError> {
        cgproc::constraints::check_query(g, u, v)?;
        Ok(g.m() % 2 == 1)
    }
}

#[test]
fn axiom_suite_flags_a_broken_oracle() {
    let res = axiom_suite(&Broken, 4, 3);
    assert_eq!(res.status, Status::Fail, "{}", res.detail);
    assert!(res.detail.contains("violated axioms"));
}
