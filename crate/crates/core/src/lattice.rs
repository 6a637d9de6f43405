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

//! The ideal periodic lattice a chip is embedded in.
//!
//! The lattice is the union of all group translates of the chip's
//! defect-free graph: every vertex and every coupler of the patch is reduced
//! to its orbit representative, and the lattice is stored implicitly as a set
//! of representative sites plus, per site, the displacement vectors of its
//! couplers. Group translations are automorphisms of this lattice by
//! construction, and the chip is always a subgraph of it.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::Result;
use crate::graph::{Coord, CouplingGraph, VertexId};
use crate::symmetry::TranslationGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicLattice {
    group: TranslationGroup,
    /// Representative site -> sorted coupler displacements.
    sites: BTreeMap<Coord, Vec<Coord>>,
}

impl PeriodicLattice {
    /// Periodizes `patch` under `group`. `patch` must carry coordinates.
    pub fn from_patch(patch: &CouplingGraph, group: &TranslationGroup) -> Option<Self> {
        let coords = patch.coords()?;
        let mut sites: BTreeMap<Coord, BTreeSet<Coord>> = BTreeMap::new();
        for &c in coords {
            sites.entry(group.reduce(c).0).or_default();
        }
        for &(u, v) in patch.edges() {
            let (cu, cv) = (coords[u as usize], coords[v as usize]);
            sites.entry(group.reduce(cu).0).or_default().insert(cv - cu);
            sites.entry(group.reduce(cv).0).or_default().insert(cu - cv);
        }
        Some(PeriodicLattice {
            group: group.clone(),
            sites: sites.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
        })
    }

    pub fn group(&self) -> &TranslationGroup {
        &self.group
    }

    /// Number of sites per unit cell.
    pub fn sites_per_cell(&self) -> usize {
        self.sites.len()
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.sites.contains_key(&self.group.reduce(c).0)
    }

    /// Coupler displacements at `c`, empty when `c` is not a lattice site.
    pub fn displacements(&self, c: Coord) -> &[Coord] {
        self.sites.get(&self.group.reduce(c).0).map_or(&[], Vec::as_slice)
    }

    pub fn is_edge(&self, a: Coord, b: Coord) -> bool {
        self.displacements(a).binary_search(&(b - a)).is_ok()
    }

    /// Lattice sites within `k` hops of some seed, sorted.
    pub fn ball(&self, seeds: &[Coord], k: u32) -> Vec<Coord> {
        let mut dist: HashMap<Coord, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        for &s in seeds {
            if self.contains(s) && dist.insert(s, 0).is_none() {
                queue.push_back(s);
            }
        }
        while let Some(c) = queue.pop_front() {
            let d = dist[&c];
            if d >= k {
                continue;
            }
            for &step in self.displacements(c) {
                let n = c + step;
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(n) {
                    e.insert(d + 1);
                    queue.push_back(n);
                }
            }
        }
        let mut out: Vec<Coord> = dist.into_keys().collect();
        out.sort_unstable();
        out
    }

    /// Finite lattice patch induced on `sites` (in the given order), with
    /// coordinates attached.
    pub fn induced(&self, sites: &[Coord]) -> Result<CouplingGraph> {
        let index: HashMap<Coord, VertexId> =
            sites.iter().enumerate().map(|(i, &c)| (c, i as VertexId)).collect();
        let mut edges = Vec::new();
        for (i, &c) in sites.iter().enumerate() {
            for &step in self.displacements(c) {
                if let Some(&j) = index.get(&(c + step)) {
                    if (i as VertexId) < j {
                        edges.push((i as VertexId, j));
                    }
                }
            }
        }
        CouplingGraph::new(sites.len(), edges)?.with_coords(sites.to_vec())
    }
}
