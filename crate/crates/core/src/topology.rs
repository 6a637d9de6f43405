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

//! Built-in chip families.
//!
//! All three families live on integer lattices with rectangular unit cells,
//! so their symmetry group is generated by the two cell shifts.

use crate::chip::{Chip, Defects, Family};
use crate::error::{Error, Result};
use crate::graph::{Coord, CouplingGraph, VertexId};
use crate::symmetry::TranslationGroup;

fn check_dims(a: u32, b: u32) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(Error::invalid(format!("chip dimensions must be positive, got {a}x{b}")));
    }
    Ok(())
}

fn build(family: Family, coords: Vec<Coord>, edges: Vec<(VertexId, VertexId)>, cell: i32) -> Result<Chip> {
    let group = TranslationGroup::rectangular(cell, cell)?;
    let gen_set = coords
        .iter()
        .enumerate()
        .filter(|(_, c)| c.x < cell && c.y < cell)
        .map(|(v, _)| v as VertexId)
        .collect();
    let graph = CouplingGraph::new(coords.len(), edges)?.with_coords(coords)?;
    Chip::new(family, graph, group, gen_set, Defects::default())
}

/// `w x h` square lattice. Vertex `y*w + x` sits at `(x, y)`.
pub fn grid(w: u32, h: u32) -> Result<Chip> {
    check_dims(w, h)?;
    let id = |x: u32, y: u32| y * w + x;
    let mut coords = Vec::with_capacity((w * h) as usize);
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            coords.push(Coord::new(x as i32, y as i32));
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    build(Family::Grid, coords, edges, 1)
}

/// Local coordinates of ring positions 0..8 inside a 4x4 cell, clockwise
/// with y pointing down.
const RING: [(i32, i32); 8] = [(2, 0), (3, 1), (3, 2), (2, 3), (1, 3), (0, 2), (0, 1), (1, 0)];

/// `r` rows by `c` columns of 8-qubit rings. Cell `(a, b)` (column `a`,
/// row `b`) holds vertices `8*(b*c + a) + p` for ring position `p`.
///
/// Neighboring rings are joined by two couplers: positions 1-6 and 2-5
/// horizontally, 3-0 and 4-7 vertically.
pub fn octagonal(r: u32, c: u32) -> Result<Chip> {
    check_dims(r, c)?;
    let id = |a: u32, b: u32, p: u32| 8 * (b * c + a) + p;
    let mut coords = Vec::with_capacity((8 * r * c) as usize);
    let mut edges = Vec::new();
    for b in 0..r {
        for a in 0..c {
            for (p, &(lx, ly)) in RING.iter().enumerate() {
                coords.push(Coord::new(4 * a as i32 + lx, 4 * b as i32 + ly));
                let p = p as u32;
                edges.push((id(a, b, p), id(a, b, (p + 1) % 8)));
            }
            if a + 1 < c {
                edges.push((id(a, b, 1), id(a + 1, b, 6)));
                edges.push((id(a, b, 2), id(a + 1, b, 5)));
            }
            if b + 1 < r {
                edges.push((id(a, b, 3), id(a, b + 1, 0)));
                edges.push((id(a, b, 4), id(a, b + 1, 7)));
            }
        }
    }
    build(Family::Octagonal, coords, edges, 4)
}

/// `r` rows by `c` columns of hexagons with a qubit on every hexagon edge.
///
/// Heavy rows sit at even `y = 0, 2, .., 2r` and span `x = 0..=4c+2`.
/// Bridge qubits at odd `y = 2k+1` sit at `x = 2*(k%2) + 4j`, `j = 0..=c`,
/// so alternate rows of hexagons are offset by half a cell. Vertices are
/// numbered in raster order over `(y, x)`.
pub fn heavy_hex(r: u32, c: u32) -> Result<Chip> {
    check_dims(r, c)?;
    let width = 4 * c as i32 + 3;
    let mut coords = Vec::new();
    for y in 0..=2 * r as i32 {
        if y % 2 == 0 {
            coords.extend((0..width).map(|x| Coord::new(x, y)));
        } else {
            let off = 2 * ((y / 2) % 2);
            coords.extend((0..=c as i32).map(|j| Coord::new(off + 4 * j, y)));
        }
    }
    let at: std::collections::HashMap<Coord, VertexId> =
        coords.iter().enumerate().map(|(v, &q)| (q, v as VertexId)).collect();
    let mut edges = Vec::new();
    for (v, &q) in coords.iter().enumerate() {
        let v = v as VertexId;
        if q.y % 2 == 0 {
            if let Some(&w) = at.get(&Coord::new(q.x + 1, q.y)) {
                edges.push((v, w));
            }
        } else {
            edges.push((at[&Coord::new(q.x, q.y - 1)], v));
            edges.push((v, at[&Coord::new(q.x, q.y + 1)]));
        }
    }
    build(Family::HeavyHex, coords, edges, 4)
}

/// Builds a chip from its family tag and dimensions. `custom` chips can
/// only be loaded from JSON.
pub fn generate(family: Family, r: u32, c: u32) -> Result<Chip> {
    match family {
        Family::Grid => grid(r, c),
        Family::Octagonal => octagonal(r, c),
        Family::HeavyHex => heavy_hex(r, c),
        Family::Custom => Err(Error::invalid("custom chips have no generator")),
    }
}
