/*
Copyright 2026 The ertkit Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
//! End-to-end tests of the command-line tool: exit codes, output files and
//! input immutability.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ertkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ertkit")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// Scenario suite and one-entry library written through the CLI itself.
struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new(set: u8, count: usize) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let f = Fixture { dir };
        let set = set.to_string();
        let count = count.to_string();
        let out = ertkit(&["gen-scenarios", "--set", &set, "--count", &count, "--seed", "3", "--out", s(&f.scenarios())]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let out = ertkit(&["gen-experiences", "--count", "1", "--seed", "3", "--lib", s(&f.lib())]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn scenarios(&self) -> PathBuf {
        self.path("scenarios.json")
    }

    fn lib(&self) -> PathBuf {
        self.path("lib")
    }

    fn experience(&self) -> PathBuf {
        self.lib().join("experience_0000.json")
    }

    /// Contents of every file under the fixture directory.
    fn snapshot(&self) -> BTreeMap<PathBuf, Vec<u8>> {
        fn walk(dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
            for e in std::fs::read_dir(dir).unwrap() {
                let p = e.unwrap().path();
                if p.is_dir() {
                    walk(&p, out);
                } else {
                    out.insert(p.clone(), std::fs::read(&p).unwrap());
                }
            }
        }
        let mut out = BTreeMap::new();
        walk(self.dir.path(), &mut out);
        out
    }
}

#[test]
fn plan_on_an_empty_world_writes_a_path() {
    let f = Fixture::new(1, 3);
    let out_path = f.path("plan.json");
    let out = ertkit(&[
        "plan", "--scenario", s(&f.scenarios()), "--index", "1", "--experience", s(&f.experience()), "--out", s(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_path.exists());
    let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(stats.is_object());
}

/// A wall across the square with a narrow gap far from the straight line,
/// and a straight prior through the wall.
fn hard_scenario(dir: &Path) -> (PathBuf, PathBuf) {
    use ertkit::path::{phase_parametrize, Configuration};
    use ertkit::world::{Obstacle, QueryInstance, World};
    let cfg = |v: [f64; 2]| Configuration::new(v.to_vec()).unwrap();
    let world = World::point2d(
        [[0.0, 4.0], [0.0, 4.0]],
        vec![Obstacle::rect([2.0, 1.875], [0.1, 1.875]), Obstacle::rect([2.0, 3.9625], [0.1, 0.0375])],
    )
    .unwrap();
    let query = QueryInstance::new(world, cfg([0.5, 0.5]), cfg([3.5, 0.5]), "gap").unwrap();
    let prior = phase_parametrize(&[cfg([0.5, 0.5]), cfg([3.5, 0.5])]).unwrap();
    let (scen, exp) = (dir.join("hard.json"), dir.join("straight.json"));
    ertkit::io::write_scenarios(&scen, &[query]).unwrap();
    ertkit::io::write_path(&exp, &prior).unwrap();
    (scen, exp)
}

#[test]
fn tiny_timeout_on_a_hard_scenario_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (scen, exp) = hard_scenario(dir.path());
    let out_path = dir.path().join("plan.json");
    for planner in ["ert", "ertconnect", "rrtconnect"] {
        for clock in ["wall", "virtual"] {
            let out = ertkit(&[
                "plan", "--scenario", s(&scen), "--experience", s(&exp), "--planner", planner, "--timeout", "0.0001",
                "--clock", clock, "--out", s(&out_path),
            ]);
            assert_eq!(code(&out), 1, "{planner}: {}", String::from_utf8_lossy(&out.stderr));
            assert!(!out_path.exists());
        }
    }
}

#[test]
fn misuse_exits_with_two() {
    let f = Fixture::new(1, 1);
    let missing = f.path("nope.json");
    let scen = f.scenarios();
    let x = f.path("x.json");
    let x = s(&x);
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["plan", "--out", x],
        vec!["gen-scenarios", "--set", "9", "--out", x],
        vec!["plan", "--scenario", s(&missing), "--out", x],
        vec!["plan", "--scenario", s(&scen), "--lib", s(&missing), "--out", x],
        vec!["plan", "--scenario", s(&scen), "--planner", "ert", "--out", x],
        vec!["plan", "--scenario", s(&scen), "--index", "7", "--planner", "rrtconnect", "--out", x],
    ];
    for args in cases {
        let out = ertkit(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert!(!Path::new(x).exists());
    assert_eq!(code(&ertkit(&["--help"])), 0);
}

#[test]
fn renders_are_well_formed_for_every_solved_bench_run() {
    let f = Fixture::new(2, 4);
    let csv_path = f.path("bench.csv");
    let out = ertkit(&[
        "bench", "--scenario", s(&f.scenarios()), "--lib", s(&f.lib()), "--reps", "1", "--clock", "virtual",
        "--out", s(&csv_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let mut solved = 0;
    for row in reader.records() {
        let row = row.unwrap();
        if &row[5] != "solved" {
            continue;
        }
        solved += 1;
        let index: usize = row[0].split('-').nth(1).unwrap().parse().unwrap();
        let svg = f.path("run.svg");
        let out = ertkit(&[
            "render", "--scenario", s(&f.scenarios()), "--index", &index.to_string(), "--lib", s(&f.lib()),
            "--planner", &row[1], "--seed", &row[4], "--clock", "virtual", "--out", s(&svg),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&svg).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
    }
    assert!(solved > 0);
}

#[test]
fn no_subcommand_touches_its_inputs() {
    let f = Fixture::new(2, 2);
    let before = f.snapshot();
    let scen = s(&f.scenarios()).to_string();
    let lib = s(&f.lib()).to_string();
    let exp = s(&f.experience()).to_string();
    let plan_out = f.path("out/plan.json");
    std::fs::create_dir_all(plan_out.parent().unwrap()).unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["plan", "--scenario", &scen, "--lib", &lib, "--clock", "virtual", "--out", s(&plan_out)],
        vec!["plan", "--scenario", &scen, "--experience", &exp, "--planner", "ert", "--out", s(&plan_out)],
        vec!["bench", "--scenario", &scen, "--lib", &lib, "--reps", "1", "--clock", "virtual", "--out", "/dev/null"],
        vec!["render", "--scenario", &scen, "--lib", &lib, "--planner", "ertconnect", "--out", "/dev/null"],
    ];
    for args in runs {
        let out = ertkit(&args);
        assert!(code(&out) <= 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    // a path file produced by plan is itself an input to render
    if plan_out.exists() {
        let path_before = std::fs::read(&plan_out).unwrap();
        let out = ertkit(&["render", "--scenario", &scen, "--path", s(&plan_out), "--out", "/dev/null"]);
        assert_eq!(code(&out), 0);
        assert_eq!(std::fs::read(&plan_out).unwrap(), path_before);
        std::fs::remove_dir_all(plan_out.parent().unwrap()).unwrap();
    }
    assert_eq!(f.snapshot(), before);
}
