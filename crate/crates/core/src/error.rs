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
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("path needs at least two distinct waypoints")]
    DegeneratePath,
    #[error("phase {0} outside [0, 1]")]
    PhaseOutOfRange(f64),
    #[error("segment bounds coincide at phase {0}")]
    DegenerateSegment(f64),
    #[error("no phase span left from {0} in the requested direction")]
    DegenerateSpan(f64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("segment is not anchored at its parent state")]
    AnchorMismatch,
    #[error("experience library is empty")]
    EmptyLibrary,
    #[error("no benchmark records to summarize")]
    EmptyRecords,
    #[error("scenario template infeasible: {0}")]
    TemplateInfeasible(String),
    #[error("experience generation failed at instance {0}")]
    GenerationFailed(usize),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidValue(msg.into())
    }
}
