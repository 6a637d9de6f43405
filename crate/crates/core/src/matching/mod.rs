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

//! Subgraph monomorphism search: an exhaustive VF2 matcher and the
//! symmetry-reduced matcher built on top of it.

mod mapping;
mod sbsm;
mod vf2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CouplingGraph, VertexId};

pub use mapping::{compose, Mapping, MatchSet};
pub use sbsm::{reduced_region, sbsm_match, sbsm_match_with, SbsmOptions};
pub use vf2::{vf2_match, vf2_match_chip, vf2_match_with, Vf2Options};

/// A connected graph to be embedded. Internal vertices are `0..k`; each
/// carries an external label (a logical qubit), strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    graph: CouplingGraph,
    labels: Vec<VertexId>,
}

impl PatternGraph {
    /// Pattern whose labels are its own vertex ids.
    pub fn new(graph: CouplingGraph) -> Result<Self> {
        let labels = graph.vertices().collect();
        Self::with_labels(graph, labels)
    }

    pub fn with_labels(graph: CouplingGraph, labels: Vec<VertexId>) -> Result<Self> {
        if labels.len() != graph.order() {
            return Err(Error::invalid(format!(
                "{} labels for a pattern of {} vertices",
                labels.len(),
                graph.order()
            )));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("pattern labels must be strictly increasing"));
        }
        if graph.order() == 0 {
            return Err(Error::invalid("pattern graph is empty"));
        }
        if !graph.is_connected() {
            let comps = graph.components();
            let shown: Vec<Vec<VertexId>> = comps
                .iter()
                .map(|c| c.iter().map(|&v| labels[v as usize]).collect())
                .collect();
            return Err(Error::invalid(format!(
                "pattern graph is disconnected; components: {shown:?}"
            )));
        }
        Ok(PatternGraph { graph, labels })
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    /// External label of internal vertex `i`.
    pub fn label(&self, i: VertexId) -> VertexId {
        self.labels[i as usize]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    /// Pattern radius and its smallest-id central vertex.
    pub fn radius(&self) -> (u32, VertexId) {
        self.graph.radius().expect("pattern graphs are connected and non-empty")
    }
}

impl Serialize for PatternGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.graph.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PatternGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = CouplingGraph::deserialize(d)?;
        PatternGraph::new(g).map_err(serde::de::Error::custom)
    }
}

/// Upper bound `n * d^(m-1)` on the number of monomorphisms of a connected
/// `m`-vertex pattern into a graph of order `n` and maximum degree `d`.
/// Saturates instead of overflowing.
pub fn match_count_bound(n: usize, d: usize, m: usize) -> u128 {
    let mut b = n as u128;
    for _ in 1..m.max(1) {
        b = b.saturating_mul(d as u128);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_disconnected_and_empty() {
        let g = CouplingGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let err = PatternGraph::new(g).unwrap_err().to_string();
        assert!(err.contains("[[0, 1], [2, 3]]"), "{err}");
        assert!(PatternGraph::new(CouplingGraph::new(0, []).unwrap()).is_err());
    }

    #[test]
    fn labels_must_increase() {
        let g = CouplingGraph::new(2, [(0, 1)]).unwrap();
        assert!(PatternGraph::with_labels(g.clone(), vec![3, 1]).is_err());
        assert!(PatternGraph::with_labels(g.clone(), vec![1]).is_err());
        let p = PatternGraph::with_labels(g, vec![1, 3]).unwrap();
        assert_eq!(p.label(1), 3);
    }

    #[test]
    fn bound_values() {
        assert_eq!(match_count_bound(49, 4, 1), 49);
        assert_eq!(match_count_bound(49, 4, 3), 49 * 16);
        assert_eq!(match_count_bound(10, 0, 2), 0);
        assert_eq!(match_count_bound(usize::MAX, usize::MAX, 10), u128::MAX);
    }
}
