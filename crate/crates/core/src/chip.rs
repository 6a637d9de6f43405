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

//! Chips: a coordinate-carrying coupling graph embedded in a periodic
//! lattice, together with its translation group, generating set and
//! defect lists.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Coord, CouplingGraph, VertexId, VertexSet};
use crate::lattice::PeriodicLattice;
use crate::symmetry::{self, bounding_box, TranslationGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Grid,
    Octagonal,
    HeavyHex,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Grid => "grid",
            Family::Octagonal => "octagonal",
            Family::HeavyHex => "heavy_hex",
            Family::Custom => "custom",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "grid" => Ok(Family::Grid),
            "octagonal" => Ok(Family::Octagonal),
            "heavy_hex" | "heavyhex" => Ok(Family::HeavyHex),
            "custom" => Ok(Family::Custom),
            other => Err(Error::invalid(format!("unknown topology family `{other}`"))),
        }
    }
}

/// Disabled qubits and couplers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defects {
    #[serde(default)]
    pub vertices: Vec<VertexId>,
    #[serde(default, with = "edge_pairs")]
    pub edges: Vec<(VertexId, VertexId)>,
}

impl Defects {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    fn normalized(mut self) -> Self {
        self.vertices.sort_unstable();
        self.vertices.dedup();
        for e in &mut self.edges {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        self.edges.sort_unstable();
        self.edges.dedup();
        self
    }
}

mod edge_pairs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::graph::VertexId;

    pub fn serialize<S: Serializer>(edges: &[(VertexId, VertexId)], s: S) -> Result<S::Ok, S::Error> {
        edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(VertexId, VertexId)>, D::Error> {
        let raw: Vec<[VertexId; 2]> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

/// Coordinate -> live vertex lookup. Dense when the bounding box is
/// reasonably filled, hashed otherwise.
#[derive(Clone, Debug)]
enum CoordIndex {
    Dense { lo: Coord, width: usize, height: usize, cells: Vec<VertexId> },
    Sparse(HashMap<Coord, VertexId>),
}

const NO_VERTEX: VertexId = VertexId::MAX;

impl CoordIndex {
    fn build(coords: &[Coord], alive: &[bool]) -> Self {
        if coords.is_empty() {
            return CoordIndex::Sparse(HashMap::new());
        }
        let (lo, hi) = bounding_box(coords);
        let width = (hi.x as i64 - lo.x as i64 + 1) as usize;
        let height = (hi.y as i64 - lo.y as i64 + 1) as usize;
        if width.saturating_mul(height) <= 16 * coords.len() + 64 {
            let mut cells = vec![NO_VERTEX; width * height];
            for (v, (c, _)) in coords.iter().zip(alive).enumerate().filter(|(_, (_, &a))| a) {
                cells[(c.y - lo.y) as usize * width + (c.x - lo.x) as usize] = v as VertexId;
            }
            CoordIndex::Dense { lo, width, height, cells }
        } else {
            CoordIndex::Sparse(
                coords
                    .iter()
                    .enumerate()
                    .filter(|&(v, _)| alive[v])
                    .map(|(v, &c)| (c, v as VertexId))
                    .collect(),
            )
        }
    }

    #[inline]
    fn get(&self, c: Coord) -> Option<VertexId> {
        match self {
            CoordIndex::Dense { lo, width, height, cells } => {
                let x = c.x.wrapping_sub(lo.x) as u32 as usize;
                let y = c.y.wrapping_sub(lo.y) as u32 as usize;
                if x < *width && y < *height {
                    let v = cells[y * width + x];
                    (v != NO_VERTEX).then_some(v)
                } else {
                    None
                }
            }
            CoordIndex::Sparse(map) => map.get(&c).copied(),
        }
    }
}

/// A coupling graph embedded in an ideal periodic lattice.
///
/// `graph` is the defect-free patch; `defects` lists disabled qubits and
/// couplers. All derived lookup structures are built once at construction.
#[derive(Clone, Debug)]
pub struct Chip {
    family: Family,
    graph: CouplingGraph,
    group: TranslationGroup,
    gen_set: Vec<VertexId>,
    defects: Defects,
    alive: Vec<bool>,
    live: CouplingGraph,
    lattice: PeriodicLattice,
    index: CoordIndex,
    classes: HashMap<Coord, Vec<VertexId>>,
    induced_in_lattice: bool,
}

impl PartialEq for Chip {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.graph == other.graph
            && self.group == other.group
            && self.gen_set == other.gen_set
            && self.defects == other.defects
    }
}

impl Chip {
    /// Validates and indexes a chip. Errors with [`Error::Config`] when the
    /// generating set does not generate the patch or a group generator is
    /// not a symmetry of the patch.
    pub fn new(
        family: Family,
        graph: CouplingGraph,
        group: TranslationGroup,
        gen_set: Vec<VertexId>,
        defects: Defects,
    ) -> Result<Self> {
        let coords = graph
            .coords()
            .ok_or_else(|| Error::config("chip graph must carry lattice coordinates"))?
            .to_vec();
        let mut gen_set = gen_set;
        gen_set.sort_unstable();
        gen_set.dedup();
        for &v in &gen_set {
            if !graph.contains(v) {
                return Err(Error::config(format!("generating-set vertex {v} is not on the chip")));
            }
        }
        let gen: VertexSet = gen_set.iter().copied().collect();
        if !symmetry::generates(&group, &coords, &gen) {
            return Err(Error::config("generating set does not cover the chip under its group"));
        }
        for g in group.generators() {
            if !symmetry::verify_automorphism_on_lattice(g, &graph) {
                return Err(Error::config(format!(
                    "translation {} is not a symmetry of the chip lattice",
                    g.shift
                )));
            }
        }

        let defects = defects.normalized();
        let mut alive = vec![true; graph.order()];
        for &v in &defects.vertices {
            if !graph.contains(v) {
                return Err(Error::invalid(format!("defect vertex {v} is not on the chip")));
            }
            alive[v as usize] = false;
        }
        let dead_edges: BTreeSet<(VertexId, VertexId)> = defects.edges.iter().copied().collect();
        for &(u, v) in &dead_edges {
            if !graph.has_edge(u, v) {
                return Err(Error::invalid(format!("defect edge ({u}, {v}) is not a chip coupler")));
            }
        }
        let live_edges = graph
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| alive[u as usize] && alive[v as usize] && !dead_edges.contains(&(u, v)));
        let live = CouplingGraph::new(graph.order(), live_edges)?.with_coords(coords.clone())?;

        let lattice = PeriodicLattice::from_patch(&graph, &group)
            .ok_or_else(|| Error::config("chip graph must carry lattice coordinates"))?;
        let index = CoordIndex::build(&coords, &alive);
        let mut classes: HashMap<Coord, Vec<VertexId>> = HashMap::new();
        for (v, &c) in coords.iter().enumerate() {
            if alive[v] {
                classes.entry(group.reduce(c).0).or_default().push(v as VertexId);
            }
        }
        let induced_in_lattice = live.vertices().filter(|&v| alive[v as usize]).all(|v| {
            let c = coords[v as usize];
            lattice.displacements(c).iter().all(|&d| match index.get(c + d) {
                Some(w) => live.has_edge(v, w),
                None => true,
            })
        });

        Ok(Chip {
            family,
            graph,
            group,
            gen_set,
            defects,
            alive,
            live,
            lattice,
            index,
            classes,
            induced_in_lattice,
        })
    }

    /// Same chip with a different defect list.
    pub fn with_defects(&self, defects: Defects) -> Result<Chip> {
        Chip::new(self.family, self.graph.clone(), self.group.clone(), self.gen_set.clone(), defects)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The defect-free patch.
    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    /// Live couplers only, in the patch's vertex numbering. Dead qubits
    /// remain as isolated vertices; use [`Chip::is_live`] to exclude them.
    pub fn live_graph(&self) -> &CouplingGraph {
        &self.live
    }

    /// The live part as a standalone graph, relabeled to `0..k` in
    /// ascending order of original id.
    pub fn live_subgraph(&self) -> Result<CouplingGraph> {
        let vs: VertexSet = self.live_vertices().collect();
        self.live.induced_subgraph(&vs)
    }

    pub fn group(&self) -> &TranslationGroup {
        &self.group
    }

    pub fn gen_set(&self) -> &[VertexId] {
        &self.gen_set
    }

    pub fn defects(&self) -> &Defects {
        &self.defects
    }

    pub fn lattice(&self) -> &PeriodicLattice {
        &self.lattice
    }

    /// Number of qubits in the patch, dead ones included.
    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn live_order(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        self.alive.get(v as usize).copied().unwrap_or(false)
    }

    pub fn alive_mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.graph.vertices().filter(|&v| self.alive[v as usize])
    }

    /// Maximum degree over live couplers.
    pub fn max_live_degree(&self) -> usize {
        self.live.max_degree()
    }

    pub fn coord(&self, v: VertexId) -> Result<Coord> {
        self.graph.coord(v).ok_or(Error::UnknownVertex(v))
    }

    /// The live vertex at `c`, if any.
    #[inline]
    pub fn live_vertex_at(&self, c: Coord) -> Option<VertexId> {
        self.index.get(c)
    }

    /// Raw view of the coordinate index when it is dense: lower corner,
    /// width, height and row-major cells (`VertexId::MAX` = no live vertex).
    pub(crate) fn dense_index(&self) -> Option<(Coord, usize, usize, &[VertexId])> {
        match &self.index {
            CoordIndex::Dense { lo, width, height, cells } => Some((*lo, *width, *height, cells)),
            CoordIndex::Sparse(_) => None,
        }
    }

    /// Live vertices in the same orbit as lattice point `c`, ascending.
    pub fn live_orbit_of(&self, c: Coord) -> &[VertexId] {
        self.classes.get(&self.group.reduce(c).0).map_or(&[], Vec::as_slice)
    }

    /// True when every lattice coupler between two live qubits is also a
    /// live chip coupler, so translated lattice edges need no re-checking.
    pub fn is_induced_in_lattice(&self) -> bool {
        self.induced_in_lattice
    }

    /// Coordinate centroid of the patch.
    pub fn centroid(&self) -> (f64, f64) {
        let coords = self.graph.coords().unwrap_or(&[]);
        if coords.is_empty() {
            return (0.0, 0.0);
        }
        let n = coords.len() as f64;
        let sx: f64 = coords.iter().map(|c| c.x as f64).sum();
        let sy: f64 = coords.iter().map(|c| c.y as f64).sum();
        (sx / n, sy / n)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChipFile {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    coords: Vec<Coord>,
    family: Family,
    group: TranslationGroup,
    gen_set: Vec<VertexId>,
    #[serde(default)]
    defects: Defects,
}

impl Serialize for Chip {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChipFile {
            n: self.graph.order(),
            edges: self.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            coords: self.graph.coords().unwrap_or(&[]).to_vec(),
            family: self.family,
            group: self.group.clone(),
            gen_set: self.gen_set.clone(),
            defects: self.defects.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chip {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = ChipFile::deserialize(d)?;
        let graph = CouplingGraph::new(f.n, f.edges.into_iter().map(|[u, v]| (u, v)))
            .and_then(|g| g.with_coords(f.coords))
            .map_err(serde::de::Error::custom)?;
        Chip::new(f.family, graph, f.group, f.gen_set, f.defects).map_err(serde::de::Error::custom)
    }
}
