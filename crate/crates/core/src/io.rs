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
//! JSON file formats and atomic writes.
//!
//! - Path file: `{"dimension": n, "waypoints": [[..], ..]}`. Phases are not
//!   stored; they are recomputed by arc length on load.
//! - Scenario file: one object, or an array of objects, with `kind`,
//!   `bounds`, `obstacles`, optional `link_lengths` and `base`, `q_start`,
//!   `q_goal` and `label`.
//! - Library: a directory of path files plus `index.json`, an array of
//!   file names whose order is the selection tie-break order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::experience::ExperienceLibrary;
use crate::path::{phase_parametrize, Configuration, PathExperience};
use crate::planner::PlannerParams;
use crate::world::{Obstacle, QueryInstance, Robot, World};

pub const LIBRARY_INDEX: &str = "index.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub dimension: usize,
    pub waypoints: Vec<Vec<f64>>,
}

impl From<&PathExperience> for PathFile {
    fn from(p: &PathExperience) -> Self {
        Self {
            dimension: p.dim(),
            waypoints: p.configurations().map(|q| q.coords().to_vec()).collect(),
        }
    }
}

impl TryFrom<PathFile> for PathExperience {
    type Error = Error;

    fn try_from(f: PathFile) -> Result<Self> {
        let waypoints = f
            .waypoints
            .into_iter()
            .map(|w| {
                let q = Configuration::new(w)?;
                q.check_dim(f.dimension)?;
                Ok(q)
            })
            .collect::<Result<Vec<_>>>()?;
        phase_parametrize(&waypoints)
    }
}

impl Serialize for PathExperience {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PathFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PathExperience {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = PathFile::deserialize(d)?;
        PathExperience::try_from(f).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldKind {
    Point2d,
    PlanarArm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub kind: WorldKind,
    pub bounds: Vec<[f64; 2]>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_lengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<[f64; 2]>,
    pub q_start: Vec<f64>,
    pub q_goal: Vec<f64>,
    #[serde(default)]
    pub label: String,
}

impl From<&QueryInstance> for ScenarioFile {
    fn from(q: &QueryInstance) -> Self {
        let (kind, link_lengths, base) = match q.world.robot() {
            Robot::Point2d => (WorldKind::Point2d, None, None),
            Robot::PlanarArm { link_lengths, base } => {
                (WorldKind::PlanarArm, Some(link_lengths.clone()), Some(*base))
            }
        };
        Self {
            kind,
            bounds: q.world.bounds().to_vec(),
            obstacles: q.world.obstacles().to_vec(),
            link_lengths,
            base,
            q_start: q.q_start.coords().to_vec(),
            q_goal: q.q_goal.coords().to_vec(),
            label: q.label.clone(),
        }
    }
}

impl TryFrom<ScenarioFile> for QueryInstance {
    type Error = Error;

    fn try_from(f: ScenarioFile) -> Result<Self> {
        let robot = match f.kind {
            WorldKind::Point2d => Robot::Point2d,
            WorldKind::PlanarArm => Robot::PlanarArm {
                link_lengths: f
                    .link_lengths
                    .ok_or_else(|| Error::invalid("planar_arm scenario needs link_lengths"))?,
                base: f.base.unwrap_or([0.0, 0.0]),
            },
        };
        let world = World::new(robot, f.bounds, f.obstacles)?;
        QueryInstance::new(
            world,
            Configuration::new(f.q_start)?,
            Configuration::new(f.q_goal)?,
            f.label,
        )
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    Many(Vec<ScenarioFile>),
    One(Box<ScenarioFile>),
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_path(path: &Path) -> Result<PathExperience> {
    read_json(path)
}

pub fn write_path(path: &Path, xi: &PathExperience) -> Result<()> {
    write_json(path, xi)
}

pub fn read_params(path: &Path) -> Result<PlannerParams> {
    let params: PlannerParams = read_json(path)?;
    params.validate()?;
    Ok(params)
}

/// Reads a single scenario object or a suite array.
pub fn read_scenarios(path: &Path) -> Result<Vec<QueryInstance>> {
    let files = match read_json::<OneOrMany>(path)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(f) => vec![*f],
    };
    files.into_iter().map(QueryInstance::try_from).collect()
}

pub fn write_scenarios(path: &Path, suite: &[QueryInstance]) -> Result<()> {
    let files: Vec<ScenarioFile> = suite.iter().map(ScenarioFile::from).collect();
    write_json(path, &files)
}

fn experience_file_name(i: usize) -> String {
    format!("experience_{i:04}.json")
}

pub fn load_library(dir: &Path) -> Result<ExperienceLibrary> {
    let names: Vec<String> = read_json(&dir.join(LIBRARY_INDEX))?;
    let paths = names
        .iter()
        .map(|n| read_path(&dir.join(n)))
        .collect::<Result<Vec<_>>>()?;
    ExperienceLibrary::new(paths)
}

/// Writes every experience and the index into `dir`, creating it if needed.
pub fn save_library(dir: &Path, library: &ExperienceLibrary) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut names = Vec::with_capacity(library.len());
    for (i, xi) in library.experiences().iter().enumerate() {
        let name = experience_file_name(i);
        write_path(&dir.join(&name), xi)?;
        names.push(name);
    }
    write_json(&dir.join(LIBRARY_INDEX), &names)
}

/// Appends one experience to an on-disk library (single writer).
pub fn append_to_library(dir: &Path, xi: &PathExperience) -> Result<usize> {
    let index = dir.join(LIBRARY_INDEX);
    let mut names: Vec<String> = if index.exists() {
        read_json(&index)?
    } else {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Vec::new()
    };
    if let Some(first) = names.first() {
        let existing = read_path(&dir.join(first))?;
        if existing.dim() != xi.dim() {
            return Err(Error::dim(existing.dim(), xi.dim()));
        }
    }
    let mut i = names.len();
    while names.contains(&experience_file_name(i)) || dir.join(experience_file_name(i)).exists() {
        i += 1;
    }
    let name = experience_file_name(i);
    write_path(&dir.join(&name), xi)?;
    names.push(name);
    write_json(&index, &names)?;
    Ok(names.len())
}
