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

//! Lattice translations, the groups they generate, and the symmetry
//! operations built on them: natural extension to vertex sets and mappings,
//! orbits, generating-set checks and automorphism checks on lattice patches.
//!
//! Symmetries act on the ideal (infinite, defect-free) lattice in which a
//! chip is embedded, never on the finite chip directly. Applying a
//! translation to chip data therefore re-resolves every image coordinate
//! against the chip and yields `None` when an image falls off the chip or
//! onto a dead qubit. There is no wrap-around.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::chip::Chip;
use crate::error::{Error, Result};
use crate::graph::{Coord, CouplingGraph, VertexId, VertexSet};
use crate::matching::{Mapping, PatternGraph};

/// A map of lattice coordinates that is a symmetry of the ideal lattice.
///
/// Only translations are provided; mirror and rotation symmetries would
/// implement this same trait.
pub trait CoordinateSymmetry {
    fn map_coord(&self, c: Coord) -> Coord;

    fn unmap_coord(&self, c: Coord) -> Coord;
}

/// Lattice shift by an integer vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Translation {
    pub shift: Coord,
}

impl Translation {
    pub const IDENTITY: Translation = Translation { shift: Coord::ORIGIN };

    pub const fn new(dx: i32, dy: i32) -> Self {
        Translation { shift: Coord::new(dx, dy) }
    }

    /// `self ∘ other`: shifts add.
    pub fn compose(self, other: Translation) -> Translation {
        Translation { shift: self.shift + other.shift }
    }

    pub fn inverse(self) -> Translation {
        Translation { shift: -self.shift }
    }

    pub fn is_identity(self) -> bool {
        self.shift == Coord::ORIGIN
    }
}

impl CoordinateSymmetry for Translation {
    fn map_coord(&self, c: Coord) -> Coord {
        c + self.shift
    }

    fn unmap_coord(&self, c: Coord) -> Coord {
        c - self.shift
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Basis {
    /// Multiples of one vector, normalized so `y > 0` or `y == 0 && x > 0`.
    Line(Coord),
    /// Lower-triangular basis `(a, 0), (b, c)` with `a, c > 0` and `0 <= b < a`.
    Plane { a: i32, b: i32, c: i32 },
}

/// Group of translations generated by one or two independent shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupFile", into = "GroupFile")]
pub struct TranslationGroup {
    generators: Vec<Translation>,
    cell: Coord,
    basis: Basis,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    generators: Vec<Translation>,
    cell: Coord,
}

impl TryFrom<GroupFile> for TranslationGroup {
    type Error = Error;

    fn try_from(file: GroupFile) -> Result<Self> {
        TranslationGroup::new(file.generators, file.cell)
    }
}

impl From<TranslationGroup> for GroupFile {
    fn from(g: TranslationGroup) -> Self {
        GroupFile { generators: g.generators, cell: g.cell }
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i64, 0i64, 0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl TranslationGroup {
    /// `generators` must be one nonzero shift or two linearly independent
    /// shifts. `cell` records the unit-cell extent and must be positive.
    pub fn new(generators: Vec<Translation>, cell: Coord) -> Result<Self> {
        if cell.x <= 0 || cell.y <= 0 {
            return Err(Error::invalid(format!("unit cell {cell} must be positive")));
        }
        let basis = match generators.as_slice() {
            [g] => {
                let s = g.shift;
                if s == Coord::ORIGIN {
                    return Err(Error::invalid("zero translation cannot generate a group"));
                }
                if s.y > 0 || (s.y == 0 && s.x > 0) {
                    Basis::Line(s)
                } else {
                    Basis::Line(-s)
                }
            }
            [g1, g2] => {
                let (x1, y1) = (g1.shift.x as i64, g1.shift.y as i64);
                let (x2, y2) = (g2.shift.x as i64, g2.shift.y as i64);
                let det = x1 * y2 - x2 * y1;
                if det == 0 {
                    return Err(Error::invalid("translation generators are linearly dependent"));
                }
                let (c, s, t) = ext_gcd(y1, y2);
                let a = det.abs() / c;
                let b = (s * x1 + t * x2).rem_euclid(a);
                Basis::Plane { a: a as i32, b: b as i32, c: c as i32 }
            }
            _ => {
                return Err(Error::invalid(format!(
                    "expected one or two generators, got {}",
                    generators.len()
                )))
            }
        };
        Ok(TranslationGroup { generators, cell, basis })
    }

    /// The two unit-cell shifts `(cx, 0)` and `(0, cy)`.
    pub fn rectangular(cx: i32, cy: i32) -> Result<Self> {
        Self::new(vec![Translation::new(cx, 0), Translation::new(0, cy)], Coord::new(cx, cy))
    }

    pub fn generators(&self) -> &[Translation] {
        &self.generators
    }

    pub fn cell(&self) -> Coord {
        self.cell
    }

    /// Splits `c` into its canonical orbit representative and the group
    /// element carrying the representative to `c`.
    pub fn reduce(&self, c: Coord) -> (Coord, Translation) {
        let (px, py) = (c.x as i64, c.y as i64);
        let rep = match self.basis {
            Basis::Line(g) => {
                let (gx, gy) = (g.x as i64, g.y as i64);
                let k = if gy > 0 { floor_div(py, gy) } else { floor_div(px, gx) };
                Coord::new((px - k * gx) as i32, (py - k * gy) as i32)
            }
            Basis::Plane { a, b, c } => {
                let k = floor_div(py, c as i64);
                let x = px - k * b as i64;
                let y = py - k * c as i64;
                let j = floor_div(x, a as i64);
                Coord::new((x - j * a as i64) as i32, y as i32)
            }
        };
        (rep, Translation { shift: c - rep })
    }

    /// Whether `t` is an element of the group.
    pub fn contains(&self, t: Translation) -> bool {
        self.reduce(t.shift).0 == Coord::ORIGIN
    }

    pub fn same_orbit(&self, a: Coord, b: Coord) -> bool {
        self.contains(Translation { shift: b - a })
    }

    /// Group elements `i*g1 + j*g2` with `|i|, |j| <= bound` (`j = 0` for a
    /// single generator).
    pub fn elements_within(&self, bound: i32) -> Vec<Translation> {
        let g1 = self.generators[0].shift;
        let g2 = self.generators.get(1).map(|t| t.shift);
        let jr = if g2.is_some() { bound } else { 0 };
        let mut out = Vec::new();
        for i in -bound..=bound {
            for j in -jr..=jr {
                let mut s = Coord::new(g1.x * i, g1.y * i);
                if let Some(g2) = g2 {
                    s = s + Coord::new(g2.x * j, g2.y * j);
                }
                out.push(Translation { shift: s });
            }
        }
        out
    }
}

/// Applies `sym` to a set of chip vertices. `Ok(None)` when some image is
/// not a live chip vertex.
pub fn apply_to_vertices<S: CoordinateSymmetry>(
    sym: &S,
    chip: &Chip,
    vs: &VertexSet,
) -> Result<Option<VertexSet>> {
    let mut out = BTreeSet::new();
    for &v in vs {
        let c = chip.coord(v)?;
        match chip.live_vertex_at(sym.map_coord(c)) {
            Some(w) => {
                out.insert(w);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Post-composes `mapping` (pattern vertex -> chip vertex) with `sym`.
/// `Ok(None)` unless every image is live and every pattern edge lands on a
/// live coupler.
pub fn apply_to_mapping<S: CoordinateSymmetry>(
    sym: &S,
    chip: &Chip,
    pattern: &PatternGraph,
    mapping: &Mapping,
) -> Result<Option<Mapping>> {
    let mut pairs = Vec::with_capacity(mapping.len());
    for &(p, t) in mapping.pairs() {
        let c = chip.coord(t)?;
        match chip.live_vertex_at(sym.map_coord(c)) {
            Some(w) => pairs.push((p, w)),
            None => return Ok(None),
        }
    }
    let moved = Mapping::new(pairs)?;
    for &(a, b) in pattern.graph().edges() {
        let (la, lb) = (pattern.label(a), pattern.label(b));
        let (Some(u), Some(v)) = (moved.get(la), moved.get(lb)) else {
            return Err(Error::invalid("mapping does not cover the pattern"));
        };
        if !chip.live_graph().has_edge(u, v) {
            return Ok(None);
        }
    }
    Ok(Some(moved))
}

/// All chip vertices (dead ones included) in the orbit of `v`.
pub fn orbit(group: &TranslationGroup, chip: &Chip, v: VertexId) -> Result<VertexSet> {
    let c = chip.coord(v)?;
    let rep = group.reduce(c).0;
    let coords = chip.graph().coords().ok_or_else(|| Error::config("chip has no coordinates"))?;
    Ok(coords
        .iter()
        .enumerate()
        .filter(|(_, &q)| group.reduce(q).0 == rep)
        .map(|(i, _)| i as VertexId)
        .collect())
}

/// True iff the orbits of `s` cover every chip vertex.
pub fn verify_generating_set(group: &TranslationGroup, chip: &Chip, s: &VertexSet) -> bool {
    let Some(coords) = chip.graph().coords() else {
        return false;
    };
    generates(group, coords, s)
}

pub(crate) fn generates(group: &TranslationGroup, coords: &[Coord], s: &VertexSet) -> bool {
    let mut reps = BTreeSet::new();
    for &v in s {
        match coords.get(v as usize) {
            Some(&c) => {
                reps.insert(group.reduce(c).0);
            }
            None => return false,
        }
    }
    coords.iter().all(|&c| reps.contains(&group.reduce(c).0))
}

/// Checks that `t` acts as an automorphism on the coordinate window of
/// `patch`: every vertex whose image coordinate lies in the window maps onto
/// a vertex, and adjacency is preserved in both directions wherever both
/// endpoints and their images lie in the window.
pub fn verify_automorphism_on_lattice<S: CoordinateSymmetry>(sym: &S, patch: &CouplingGraph) -> bool {
    let Some(coords) = patch.coords() else {
        return false;
    };
    if coords.is_empty() {
        return true;
    }
    let (lo, hi) = bounding_box(coords);
    let inside = |c: Coord| c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y;
    let at: HashMap<Coord, VertexId> =
        coords.iter().enumerate().map(|(i, &c)| (c, i as VertexId)).collect();

    let mut image = vec![None; coords.len()];
    for (v, &c) in coords.iter().enumerate() {
        let m = sym.map_coord(c);
        if inside(m) {
            match at.get(&m) {
                Some(&w) => image[v] = Some(w),
                None => return false,
            }
        }
    }
    let mut preimage = vec![None; coords.len()];
    for (w, &c) in coords.iter().enumerate() {
        let p = sym.unmap_coord(c);
        if inside(p) {
            match at.get(&p) {
                Some(&v) => preimage[w] = Some(v),
                None => return false,
            }
        }
    }
    for &(u, v) in patch.edges() {
        if let (Some(a), Some(b)) = (image[u as usize], image[v as usize]) {
            if !patch.has_edge(a, b) {
                return false;
            }
        }
        if let (Some(a), Some(b)) = (preimage[u as usize], preimage[v as usize]) {
            if !patch.has_edge(a, b) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn bounding_box(coords: &[Coord]) -> (Coord, Coord) {
    let mut lo = Coord::new(i32::MAX, i32::MAX);
    let mut hi = Coord::new(i32::MIN, i32::MIN);
    for c in coords {
        lo = Coord::new(lo.x.min(c.x), lo.y.min(c.y));
        hi = Coord::new(hi.x.max(c.x), hi.y.max(c.y));
    }
    (lo, hi)
}
