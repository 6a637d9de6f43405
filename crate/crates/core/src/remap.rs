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

//! End-to-end remapping: find every placement of a circuit's interaction
//! graph, score them all and rank.

use serde::{Deserialize, Serialize};

use crate::chip::Chip;
use crate::circuit::{interaction_graph, Circuit};
use crate::error::{Error, Result};
use crate::error_map::ErrorMap;
use crate::matching::{sbsm_match_with, vf2_match_chip, Mapping, MatchSet, PatternGraph, SbsmOptions};
use crate::scoring::{score_loop, score_vectorized, score_vectorized_parallel, ScoreVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredMapping {
    #[serde(rename = "map", with = "pairs")]
    pub mapping: Mapping,
    pub score: f64,
}

mod pairs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::matching::Mapping;

    pub fn serialize<S: Serializer>(m: &Mapping, s: S) -> Result<S::Ok, S::Error> {
        m.pairs().iter().map(|&(p, t)| [p, t]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mapping, D::Error> {
        let raw: Vec<[u32; 2]> = Vec::deserialize(d)?;
        Mapping::new(raw.into_iter().map(|[p, t]| (p, t))).map_err(serde::de::Error::custom)
    }
}

/// Best mapping plus every mapping, by descending score. Equal scores keep
/// canonical mapping order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Remap {
    pub best: ScoredMapping,
    pub scores: Vec<ScoredMapping>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RemapOptions {
    pub parallel: bool,
}

/// Stable ranking of `matches` by descending score.
pub fn rank(matches: &MatchSet, scores: &ScoreVector) -> Vec<ScoredMapping> {
    let mut order: Vec<usize> = (0..matches.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order.into_iter().map(|i| ScoredMapping { mapping: matches.mapping(i), score: scores[i] }).collect()
}

fn no_fit(pattern: &PatternGraph, chip: &Chip, detail: Option<String>) -> Error {
    let pd = pattern.graph().max_degree();
    let cd = chip.max_live_degree();
    let mut msg = String::from("circuit does not fit topology");
    if pd > cd {
        msg += &format!(": interaction graph needs degree {pd} but the chip's maximum degree is {cd}");
    } else if let Some(d) = detail {
        msg += &format!(": {d}");
    } else {
        msg += ": no placement of the interaction graph exists";
    }
    Error::DoesNotFit(msg)
}

fn finish(pattern: &PatternGraph, chip: &Chip, matches: MatchSet, scores: ScoreVector) -> Result<Remap> {
    let scores = rank(&matches, &scores);
    let best = scores.first().cloned().ok_or_else(|| no_fit(pattern, chip, None))?;
    Ok(Remap { best, scores })
}

/// Symmetry-reduced matching, identity pre-layout and bulk scoring.
pub fn sbcm(c: &Circuit, chip: &Chip, e: &ErrorMap) -> Result<Remap> {
    sbcm_with(c, chip, e, RemapOptions::default())
}

pub fn sbcm_with(c: &Circuit, chip: &Chip, e: &ErrorMap, opts: RemapOptions) -> Result<Remap> {
    e.validate_for(chip)?;
    let pattern = interaction_graph(c)?;
    let found = match sbsm_match_with(&pattern, chip, SbsmOptions { parallel: opts.parallel }) {
        Err(Error::DoesNotFit(d)) => return Err(no_fit(&pattern, chip, Some(d))),
        r => r?,
    };
    if found.is_empty() {
        return Err(no_fit(&pattern, chip, None));
    }
    let l_pre = Mapping::identity(pattern.labels().iter().copied())?;
    let matches = found.precompose(&l_pre)?;
    let scores = if opts.parallel {
        score_vectorized_parallel(&matches, c, e)?
    } else {
        score_vectorized(&matches, c, e)?
    };
    finish(&pattern, chip, matches, scores)
}

/// Reference pipeline: full-chip VF2 and per-mapping scoring.
pub fn mapomatic_pipeline(c: &Circuit, chip: &Chip, e: &ErrorMap) -> Result<Remap> {
    e.validate_for(chip)?;
    let pattern = interaction_graph(c)?;
    let matches = vf2_match_chip(&pattern, chip)?;
    let scores = score_loop(&matches, c, e)?;
    finish(&pattern, chip, matches, scores)
}
