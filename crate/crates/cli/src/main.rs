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
//! `ertkit` command-line front end.
//!
//! Exit codes: 0 on success, 1 when `plan` times out without a path, 2 on
//! usage or validation errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ertkit::bench::{
    build_experience_library, csv_bytes, generate_scenarios, run_benchmark, summarize, BenchConfig, ScenarioSpec,
    SummaryRow,
};
use ertkit::experience::{map_experience, ExperienceLibrary};
use ertkit::io::{load_library, read_params, read_path, read_scenarios, save_library, write_atomic, write_json, write_path, write_scenarios};
use ertkit::path::PathExperience;
use ertkit::planner::{ClockMode, PlanResult, PlanStatus, PlannerKind, PlannerParams};
use ertkit::render::{render_svg, Layers};
use ertkit::world::QueryInstance;

#[derive(Parser, Debug)]
#[command(name = "ertkit", version, about = "Experience-driven random trees for motion planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded scenario suite as JSON.
    GenScenarios(GenScenariosArgs),
    /// Solve obstacle-free generator instances with RRTConnect and store
    /// the paths as an experience library.
    GenExperiences(GenExperiencesArgs),
    /// Plan one query.
    Plan(PlanArgs),
    /// Run every planner on a scenario suite and write per-run CSV records.
    Bench(BenchArgs),
    /// Draw a scenario, optionally with a prior, search trees and a path, as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RobotArg {
    Point,
    Arm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClockArg {
    Wall,
    Virtual,
}

/// Planner parameter sources, applied in order: defaults, `--params`, flags.
#[derive(Args, Debug)]
struct ParamArgs {
    /// JSON file with planner parameters.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Planning timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, value_enum)]
    clock: Option<ClockArg>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<PlannerParams> {
        let mut params = match &self.params {
            Some(p) => read_params(p)?,
            None => PlannerParams::default(),
        };
        if let Some(s) = self.seed {
            params.seed = s;
        }
        if let Some(t) = self.timeout {
            params.timeout = t;
        }
        if let Some(c) = self.clock {
            params.clock = match c {
                ClockArg::Wall => ClockMode::Wall,
                ClockArg::Virtual => ClockMode::Virtual,
            };
        }
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args, Debug)]
struct GenScenariosArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    set: u8,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "point")]
    robot: RobotArg,
    /// Output JSON file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenExperiencesArgs {
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, value_enum, default_value = "point")]
    robot: RobotArg,
    /// Library directory to write.
    #[arg(long)]
    lib: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
}

/// Where the prior comes from: one path file or a library to select from.
#[derive(Args, Debug)]
struct PriorArgs {
    /// Single experience path file.
    #[arg(long, conflicts_with = "lib")]
    experience: Option<PathBuf>,
    /// Experience library directory; the closest experience is selected.
    #[arg(long)]
    lib: Option<PathBuf>,
}

impl PriorArgs {
    fn load(&self, query: &QueryInstance) -> Result<Option<PathExperience>> {
        if let Some(p) = &self.experience {
            return Ok(Some(read_path(p)?));
        }
        if let Some(dir) = &self.lib {
            let lib = load_library(dir)?;
            let (_, xi) = lib.select(&query.q_start, &query.q_goal)?;
            return Ok(Some(xi.clone()));
        }
        Ok(None)
    }
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// Scenario file holding one instance or a suite.
    #[arg(long)]
    scenario: PathBuf,
    /// Instance index within the suite.
    #[arg(long, default_value_t = 0)]
    index: usize,
}

impl ScenarioArgs {
    fn load(&self) -> Result<QueryInstance> {
        let suite = read_scenarios(&self.scenario)?;
        let n = suite.len();
        suite
            .into_iter()
            .nth(self.index)
            .with_context(|| format!("index {} out of range for {} instance(s)", self.index, n))
    }
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    prior: PriorArgs,
    #[arg(long, default_value = "ertconnect")]
    planner: PlannerKind,
    #[command(flatten)]
    params: ParamArgs,
    /// Output path file, written only when a path is found.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Scenario suite file; without it a suite is generated from
    /// `--set`, `--count` and `--seed`.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    set: u8,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, value_enum, default_value = "point")]
    robot: RobotArg,
    /// Experience library directory; without it a library of the largest
    /// requested size is generated in memory.
    #[arg(long)]
    lib: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    lib_sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, value_delimiter = ',', default_value = "ert,ertconnect,rrtconnect")]
    planner: Vec<PlannerKind>,
    #[command(flatten)]
    params: ParamArgs,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON file for the per-group summary.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    prior: PriorArgs,
    /// Run this planner and draw its trees and path.
    #[arg(long)]
    planner: Option<PlannerKind>,
    /// Draw an existing path file instead of planning.
    #[arg(long, conflicts_with = "planner")]
    path: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    /// Output SVG file.
    #[arg(long)]
    out: PathBuf,
}

fn spec_for(set: u8, count: usize, seed: u64, robot: RobotArg) -> Result<ScenarioSpec> {
    let spec = ScenarioSpec::new(set, count, seed)?;
    Ok(match robot {
        RobotArg::Point => spec,
        RobotArg::Arm => spec.with_planar_arm(),
    })
}

fn gen_scenarios(args: GenScenariosArgs) -> Result<ExitCode> {
    let spec = spec_for(args.set, args.count, args.seed, args.robot)?;
    let suite = generate_scenarios(&spec)?;
    write_scenarios(&args.out, &suite)?;
    eprintln!("wrote {} scenarios to {}", suite.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn gen_experiences(args: GenExperiencesArgs) -> Result<ExitCode> {
    let params = args.params.resolve()?;
    let template = spec_for(2, 1, params.seed, args.robot)?;
    let lib = build_experience_library(args.count, params.seed, &template, &params)?;
    save_library(&args.lib, &lib)?;
    eprintln!("wrote {} experiences to {}", lib.len(), args.lib.display());
    Ok(ExitCode::SUCCESS)
}

fn plan(args: PlanArgs) -> Result<ExitCode> {
    let params = args.params.resolve()?;
    let query = args.scenario.load()?;
    let prior = args.prior.load(&query)?;
    if args.planner.uses_experience() && prior.is_none() {
        bail!("planner {} needs --experience or --lib", args.planner);
    }
    let result = args.planner.plan(&query, prior.as_ref(), &params);
    println!("{}", serde_json::to_string(&result.stats)?);
    match (result.status, &result.path) {
        (PlanStatus::Solved, Some(path)) => {
            write_path(&args.out, path)?;
            Ok(ExitCode::SUCCESS)
        }
        (PlanStatus::InvalidQuery, _) => bail!("invalid query '{}' for {}", query.label, args.planner),
        _ => {
            eprintln!("{}: no path within the budget", args.planner);
            Ok(ExitCode::from(1))
        }
    }
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let params = args.params.resolve()?;
    let suite = match &args.scenario {
        Some(p) => read_scenarios(p)?,
        None => generate_scenarios(&spec_for(args.set, args.count, params.seed, args.robot)?)?,
    };
    let uses_library = args.planner.iter().any(|p| p.uses_experience());
    let library = match (&args.lib, uses_library) {
        (_, false) => ExperienceLibrary::default(),
        (Some(dir), true) => load_library(dir)?,
        (None, true) => {
            let size = args.lib_sizes.iter().copied().max().unwrap_or(1);
            let template = spec_for(args.set, 1, params.seed, args.robot)?;
            build_experience_library(size, params.seed, &template, &params)?
        }
    };
    let cfg = BenchConfig {
        planners: args.planner,
        library_sizes: args.lib_sizes,
        repetitions: args.reps,
        params,
        threads: None,
    };
    let records = run_benchmark(&suite, &library, &cfg)?;
    write_atomic(&args.out, &csv_bytes(&records)?)?;
    let rows = summarize(&records)?;
    if let Some(path) = &args.summary {
        write_json(path, &rows)?;
    }
    print_summary(&rows);
    Ok(ExitCode::SUCCESS)
}

fn print_summary(rows: &[SummaryRow]) {
    let ms = |v: Option<f64>| v.map_or("-".to_string(), |s| format!("{:.3}", s * 1e3));
    println!("{:<11} {:>3} {:>4} {:>5} {:>8} {:>10} {:>10}", "planner", "set", "lib", "runs", "success", "median_ms", "p95_ms");
    for r in rows {
        println!(
            "{:<11} {:>3} {:>4} {:>5} {:>7.1}% {:>10} {:>10}",
            r.planner.name(),
            r.set.map_or("-".to_string(), |s| s.to_string()),
            r.lib_size,
            r.runs,
            100.0 * r.success_rate,
            ms(r.median_s),
            ms(r.p95_s)
        );
    }
}

fn render(args: RenderArgs) -> Result<ExitCode> {
    let params = args.params.resolve()?;
    let query = args.scenario.load()?;
    let prior = args.prior.load(&query)?;
    let mapped = match &prior {
        Some(xi) => Some(map_experience(xi, &query.q_start, &query.q_goal)?),
        None => None,
    };
    let result = match args.planner {
        Some(kind) => {
            if kind.uses_experience() && prior.is_none() {
                bail!("planner {kind} needs --experience or --lib");
            }
            Some(kind.plan(&query, prior.as_ref(), &params))
        }
        None => None,
    };
    let drawn_path = match &args.path {
        Some(p) => Some(PlanResult {
            status: PlanStatus::Solved,
            path: Some(read_path(p)?),
            stats: Default::default(),
            search: Default::default(),
        }),
        None => None,
    };
    let svg = render_svg(
        &query,
        Layers {
            prior: mapped.as_ref(),
            result: result.as_ref().or(drawn_path.as_ref()),
        },
    );
    write_atomic(&args.out, svg.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

/// Error chain on one line, skipping causes already spelled out by their
/// parent's message.
fn one_line(err: &anyhow::Error) -> String {
    let mut line = String::new();
    for cause in err.chain() {
        let text = cause.to_string().replace('\n', " ");
        if !line.contains(&text) {
            if !line.is_empty() {
                line.push_str(": ");
            }
            line.push_str(&text);
        }
    }
    line
}

fn check_inputs(paths: &[Option<&Path>]) -> Result<()> {
    for p in paths.iter().flatten() {
        if !p.exists() {
            bail!("{}: no such file or directory", p.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::GenScenarios(a) => gen_scenarios(a),
        Command::GenExperiences(a) => {
            check_inputs(&[a.params.params.as_deref()])?;
            gen_experiences(a)
        }
        Command::Plan(a) => {
            check_inputs(&[
                Some(a.scenario.scenario.as_path()),
                a.prior.experience.as_deref(),
                a.prior.lib.as_deref(),
                a.params.params.as_deref(),
            ])?;
            plan(a)
        }
        Command::Bench(a) => {
            check_inputs(&[a.scenario.as_deref(), a.lib.as_deref(), a.params.params.as_deref()])?;
            bench(a)
        }
        Command::Render(a) => {
            check_inputs(&[
                Some(a.scenario.scenario.as_path()),
                a.prior.experience.as_deref(),
                a.prior.lib.as_deref(),
                a.path.as_deref(),
                a.params.params.as_deref(),
            ])?;
            render(a)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::from(2)
        }
    }
}
