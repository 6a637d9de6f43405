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

//! Undirected coupling graphs and the breadth-first distance machinery used
//! by every other module: distances, eccentricity, radius, k-th order
//! neighborhoods and induced subgraphs.
//!
//! Vertices are dense integers `0..n`. Edges are kept both as a sorted list
//! of `(u, v)` pairs with `u < v` and as compressed per-vertex neighbor lists,
//! so iteration order is deterministic everywhere.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// An ordered set of vertex identifiers.
pub type VertexSet = BTreeSet<VertexId>;

/// Integer lattice coordinate. Also used for displacement vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }
}

impl From<[i32; 2]> for Coord {
    fn from([x, y]: [i32; 2]) -> Self {
        Coord { x, y }
    }
}

impl From<Coord> for [i32; 2] {
    fn from(c: Coord) -> Self {
        [c.x, c.y]
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, rhs: Coord) -> Coord {
        Coord::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, rhs: Coord) -> Coord {
        Coord::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord::new(-self.x, -self.y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Shortest-path length; `Infinite` when no path exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    fn from_raw(d: u32) -> Self {
        if d == UNREACHED {
            Distance::Infinite
        } else {
            Distance::Finite(d)
        }
    }
}

const UNREACHED: u32 = u32::MAX;

/// Undirected simple graph over vertices `0..n`, optionally carrying one
/// lattice coordinate per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct CouplingGraph {
    edges: Vec<(VertexId, VertexId)>,
    offsets: Vec<u32>,
    targets: Vec<VertexId>,
    coords: Option<Vec<Coord>>,
}

impl CouplingGraph {
    /// Builds a graph on `n` vertices. Edge endpoints are normalized so the
    /// input order and orientation do not matter; self-loops, duplicate
    /// edges and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        if n > u32::MAX as usize / 2 {
            return Err(Error::invalid(format!("graph order {n} is too large")));
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop on vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }

        let mut degree = vec![0u32; n];
        for &(u, v) in &normalized {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0u32);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; normalized.len() * 2];
        for &(u, v) in &normalized {
            targets[fill[u as usize] as usize] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize] as usize] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        Ok(CouplingGraph { edges: normalized, offsets, targets, coords: None })
    }

    /// Attaches one coordinate per vertex. Coordinates must be distinct.
    pub fn with_coords(mut self, coords: Vec<Coord>) -> Result<Self> {
        if coords.len() != self.order() {
            return Err(Error::invalid(format!(
                "{} coordinates supplied for {} vertices",
                coords.len(),
                self.order()
            )));
        }
        let mut seen = BTreeSet::new();
        for (v, c) in coords.iter().enumerate() {
            if !seen.insert(*c) {
                return Err(Error::invalid(format!("coordinate {c} assigned twice (vertex {v})")));
            }
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.order() as VertexId
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn coords(&self) -> Option<&[Coord]> {
        self.coords.as_deref()
    }

    pub fn coord(&self, v: VertexId) -> Option<Coord> {
        self.coords.as_ref().and_then(|c| c.get(v as usize).copied())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.order()
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Sorted neighbor list. Panics on an unknown vertex.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check(v)?;
        Ok(self.neighbors(v).len())
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.neighbors(v).len()).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.contains(v) && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Multi-source BFS; entries are hop counts or `UNREACHED`. Stops
    /// expanding past `limit` hops when one is given.
    fn bfs(&self, sources: impl IntoIterator<Item = VertexId>, limit: Option<u32>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.order()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s as usize] != 0 {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if limit.is_some_and(|k| du >= k) {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Hop distances from `source` to every vertex.
    pub fn distances_from(&self, source: VertexId) -> Result<Vec<Distance>> {
        self.check(source)?;
        Ok(self.bfs([source], None).into_iter().map(Distance::from_raw).collect())
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<Distance> {
        self.check(u)?;
        self.check(v)?;
        Ok(Distance::from_raw(self.bfs([u], None)[v as usize]))
    }

    /// Greatest distance from `v` to any vertex.
    pub fn eccentricity(&self, v: VertexId) -> Result<Distance> {
        self.check(v)?;
        let far = self.bfs([v], None).into_iter().max().unwrap_or(0);
        Ok(Distance::from_raw(far))
    }

    /// Minimum eccentricity together with the smallest vertex attaining it.
    /// Errors on empty or disconnected graphs.
    pub fn radius(&self) -> Result<(u32, VertexId)> {
        if self.order() == 0 {
            return Err(Error::invalid("radius of an empty graph is undefined"));
        }
        if !self.is_connected() {
            return Err(Error::invalid("radius of a disconnected graph is undefined"));
        }
        let mut best = (u32::MAX, 0);
        for v in self.vertices() {
            let ecc = self.bfs([v], None).into_iter().max().unwrap_or(0);
            if ecc < best.0 {
                best = (ecc, v);
            }
        }
        Ok(best)
    }

    /// All vertices within `k` hops of some seed vertex (the seed included).
    pub fn neighborhood(&self, seed: &VertexSet, k: u32) -> Result<VertexSet> {
        for &s in seed {
            self.check(s)?;
        }
        let dist = self.bfs(seed.iter().copied(), Some(k));
        Ok(self.vertices().filter(|&v| dist[v as usize] <= k).collect())
    }

    /// Subgraph induced by `vs`. Vertex `i` of the result is the `i`-th
    /// smallest member of `vs`; coordinates are carried over.
    pub fn induced_subgraph(&self, vs: &VertexSet) -> Result<CouplingGraph> {
        let mut relabel = vec![UNREACHED; self.order()];
        for (i, &v) in vs.iter().enumerate() {
            self.check(v)?;
            relabel[v as usize] = i as u32;
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            let (a, b) = (relabel[u as usize], relabel[v as usize]);
            (a != UNREACHED && b != UNREACHED).then_some((a, b))
        });
        let graph = CouplingGraph::new(vs.len(), edges)?;
        match &self.coords {
            Some(coords) => graph.with_coords(vs.iter().map(|&v| coords[v as usize]).collect()),
            None => Ok(graph),
        }
    }

    /// True iff a single BFS reaches every vertex. The empty graph counts as
    /// connected.
    pub fn is_connected(&self) -> bool {
        if self.order() == 0 {
            return true;
        }
        self.bfs([0], None).iter().all(|&d| d != UNREACHED)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut label = vec![UNREACHED; self.order()];
        let mut out = Vec::new();
        for v in self.vertices() {
            if label[v as usize] != UNREACHED {
                continue;
            }
            let dist = self.bfs([v], None);
            let comp: Vec<VertexId> =
                self.vertices().filter(|&u| dist[u as usize] != UNREACHED).collect();
            for &u in &comp {
                label[u as usize] = out.len() as u32;
            }
            out.push(comp);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Coord>>,
}

impl TryFrom<GraphFile> for CouplingGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let graph = CouplingGraph::new(file.n, file.edges.into_iter().map(|[u, v]| (u, v)))?;
        match file.coords {
            Some(coords) => graph.with_coords(coords),
            None => Ok(graph),
        }
    }
}

impl From<CouplingGraph> for GraphFile {
    fn from(g: CouplingGraph) -> Self {
        GraphFile {
            n: g.order(),
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            coords: g.coords,
        }
    }
}
