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
//! # ertkit
//!
//! Experience-driven random trees for sampling-based motion planning.
//!
//! A single prior path (an *experience*) is mapped onto a new query and then
//! reused piecewise: short phase slices of it are extracted, sheared and
//! shifted, and chained into a tree until the tree reaches the goal. Two
//! planners are provided, the uni-directional [`planner::ert_plan`] and the
//! bi-directional [`planner::ertconnect_plan`], together with a plain
//! RRTConnect baseline ([`planner::rrtconnect_plan`]).
//!
//! The rest of the crate is the scaffolding needed to exercise them:
//!
//! - [`path`]: configurations, phased states, phase-parametrized paths and
//!   micro-segments.
//! - [`world`]: a 2-D point robot and a planar n-link arm among rectangles and
//!   circles, with discretized validity checking.
//! - [`experience`]: experience libraries, prior selection and prior mapping.
//! - [`bench`]: shelf-like scenario generation, library construction,
//!   benchmark execution and summaries.
//! - [`render`]: SVG output of worlds, trees and paths.
//!
//! ```
//! use ertkit::path::Configuration;
//! use ertkit::planner::{ertconnect_plan, PlannerParams, PlanStatus};
//! use ertkit::world::{QueryInstance, World};
//! use ertkit::path::phase_parametrize;
//!
//! let world = World::point2d([[0.0, 5.0], [0.0, 5.0]], vec![]).unwrap();
//! let query = QueryInstance::new(
//!     world,
//!     Configuration::new(vec![0.5, 0.5]).unwrap(),
//!     Configuration::new(vec![4.5, 4.5]).unwrap(),
//!     "demo",
//! )
//! .unwrap();
//! let prior = phase_parametrize(&[
//!     Configuration::new(vec![0.0, 0.0]).unwrap(),
//!     Configuration::new(vec![1.0, 2.0]).unwrap(),
//! ])
//! .unwrap();
//! let result = ertconnect_plan(&query, &prior, &PlannerParams::default());
//! assert_eq!(result.status, PlanStatus::Solved);
//! ```

pub mod bench;
pub mod error;
pub mod experience;
pub mod io;
pub mod path;
pub mod planner;
pub mod render;
pub mod world;

pub use error::{Error, Result};
