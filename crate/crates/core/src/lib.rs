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

//! Symmetry-based subgraph matching and circuit remapping on periodic
//! qubit lattices.
//!
//! A [`Chip`] is a coupling graph with lattice coordinates, a translation
//! group and a generating set. [`sbsm_match`] finds every placement of a
//! pattern by searching only near the generating set and translating the
//! results; [`vf2_match_chip`] is the exhaustive reference. [`sbcm`] scores
//! all placements of a circuit against an [`ErrorMap`] and ranks them.

pub mod chip;
pub mod circuit;
pub mod error;
pub mod error_map;
pub mod graph;
pub mod lattice;
pub mod matching;
pub mod remap;
pub mod scoring;
pub mod symmetry;
pub mod topology;

pub use chip::{Chip, Defects, Family};
pub use circuit::{deutsch_jozsa_5, deutsch_jozsa_5_path, interaction_graph, Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use error_map::{gaussian_error_map, ErrorMap, GaussianParams};
pub use graph::{Coord, CouplingGraph, Distance, VertexId, VertexSet};
pub use lattice::PeriodicLattice;
pub use matching::{
    compose, match_count_bound, reduced_region, sbsm_match, sbsm_match_with, vf2_match, vf2_match_chip,
    vf2_match_with, Mapping, MatchSet, PatternGraph, SbsmOptions, Vf2Options,
};
pub use remap::{mapomatic_pipeline, rank, sbcm, sbcm_with, Remap, RemapOptions, ScoredMapping};
pub use scoring::{score_loop, score_vectorized, score_vectorized_parallel, ScoreVector};
pub use symmetry::{CoordinateSymmetry, Translation, TranslationGroup};
pub use topology::{grid, heavy_hex, octagonal};
