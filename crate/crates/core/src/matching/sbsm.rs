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

//! Symmetry-reduced matching.
//!
//! Every match on the chip is a lattice translate of a match whose central
//! pattern vertex lands on the generating set, and such a match lies within
//! the pattern radius of that vertex. So it is enough to search the small
//! lattice ball around the generating set once and then slide each result
//! over the chip.

use std::collections::HashMap;

use rayon::prelude::*;

use super::vf2::{vf2_match_with, Vf2Options};
use super::{MatchSet, PatternGraph};
use crate::chip::Chip;
use crate::error::{Error, Result};
use crate::graph::{Coord, CouplingGraph, VertexId};
use crate::symmetry::bounding_box;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SbsmOptions {
    /// Spread the translation step over the rayon pool. Output is identical.
    pub parallel: bool,
}

struct Region {
    graph: CouplingGraph,
    /// Region vertices sitting on the generating set.
    roots: Vec<VertexId>,
}

fn region(pattern: &PatternGraph, chip: &Chip) -> Result<Region> {
    let (r, _) = pattern.radius();
    let seeds = chip.gen_set().iter().map(|&v| chip.coord(v)).collect::<Result<Vec<Coord>>>()?;
    let sites = chip.lattice().ball(&seeds, r);
    let roots = seeds
        .iter()
        .map(|c| sites.binary_search(c).map(|i| i as VertexId))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::config("generating set lies off the chip lattice"))?;
    Ok(Region { graph: chip.lattice().induced(&sites)?, roots })
}

/// The defect-free lattice patch within pattern-radius hops of the
/// generating set, with lattice coordinates.
pub fn reduced_region(pattern: &PatternGraph, chip: &Chip) -> Result<CouplingGraph> {
    Ok(region(pattern, chip)?.graph)
}

pub fn sbsm_match(pattern: &PatternGraph, chip: &Chip) -> Result<MatchSet> {
    sbsm_match_with(pattern, chip, SbsmOptions::default())
}

/// Same match set as running VF2 against the live chip.
pub fn sbsm_match_with(pattern: &PatternGraph, chip: &Chip, opts: SbsmOptions) -> Result<MatchSet> {
    let Region { graph: r, roots } = region(pattern, chip)?;
    if pattern.order() > r.order() {
        return Err(Error::DoesNotFit(format!(
            "pattern has {} vertices but its reduced region only {}",
            pattern.order(),
            r.order()
        )));
    }
    let (_, pc) = pattern.radius();
    let h0 = vf2_match_with(pattern, &r, Vf2Options { alive: None, pin: Some((pc, &roots)) })?;
    let rc = r.coords().expect("lattice patches carry coordinates");
    let w = pattern.order();

    // Re-anchor every initial match at the image of pattern vertex 0: the
    // translates with vertex 0 on chip vertex `u` are exactly the templates
    // of u's orbit class placed at u. Sweeping `u` in ascending order then
    // yields rows already in canonical order.
    let group = chip.group();
    let mut templates: HashMap<Coord, Vec<Vec<Coord>>> = HashMap::new();
    for row in h0.rows() {
        let base = rc[row[0] as usize];
        let offsets = row.iter().map(|&v| rc[v as usize] - base).collect();
        templates.entry(group.reduce(base).0).or_default().push(offsets);
    }
    let templates: HashMap<Coord, Vec<Coord>> = templates
        .into_iter()
        .map(|(class, mut list)| {
            // raster order of the offsets, which is the id order on most chips
            list.sort_unstable_by(|a, b| a.iter().map(|c| (c.y, c.x)).cmp(b.iter().map(|c| (c.y, c.x))));
            list.dedup();
            (class, list.concat())
        })
        .collect();

    let chip_coords = chip.graph().coords().expect("chips carry coordinates");
    let edges = pattern.graph().edges();
    let check_edges = !chip.is_induced_in_lattice();
    let live = chip.live_graph();
    let dense = chip.dense_index();
    // per class: cell-index deltas and the offset bounding box, for the
    // bounds-check-free path on a dense index
    let fast: HashMap<Coord, (Vec<isize>, Coord, Coord)> = match dense {
        Some((_, width, _, _)) => templates
            .iter()
            .map(|(&class, flat)| {
                let deltas = flat.iter().map(|d| d.y as isize * width as isize + d.x as isize).collect();
                let (lo, hi) = bounding_box(flat);
                (class, (deltas, lo, hi))
            })
            .collect(),
        None => HashMap::new(),
    };
    let place = |u: VertexId, out: &mut Vec<VertexId>| {
        let cu = chip_coords[u as usize];
        let class = group.reduce(cu).0;
        let Some(flat) = templates.get(&class) else {
            return;
        };
        let start = out.len();
        let interior = dense.and_then(|(lo, width, height, cells)| {
            let (deltas, dlo, dhi) = &fast[&class];
            let (x, y) = ((cu.x - lo.x) as i64, (cu.y - lo.y) as i64);
            let inside = x + (dlo.x as i64) >= 0
                && y + (dlo.y as i64) >= 0
                && x + (dhi.x as i64) < width as i64
                && y + (dhi.y as i64) < height as i64;
            inside.then(|| (cells, deltas, (y * width as i64 + x) as isize))
        });
        if let Some((cells, deltas, here)) = interior {
            'template: for ds in deltas.chunks_exact(w) {
                let at = out.len();
                out.push(u);
                for &d in &ds[1..] {
                    let v = cells[(here + d) as usize];
                    if v == VertexId::MAX {
                        out.truncate(at);
                        continue 'template;
                    }
                    out.push(v);
                }
                if check_edges && !edges.iter().all(|&(a, b)| live.has_edge(out[at + a as usize], out[at + b as usize])) {
                    out.truncate(at);
                }
            }
        } else {
            'template: for offsets in flat.chunks_exact(w) {
                let at = out.len();
                out.push(u);
                for &d in &offsets[1..] {
                    match chip.live_vertex_at(cu + d) {
                        Some(v) => out.push(v),
                        None => {
                            out.truncate(at);
                            continue 'template;
                        }
                    }
                }
                if check_edges && !edges.iter().all(|&(a, b)| live.has_edge(out[at + a as usize], out[at + b as usize])) {
                    out.truncate(at);
                }
            }
        }
        let group_rows = &mut out[start..];
        if !group_rows.chunks_exact(w).is_sorted() {
            super::mapping::sort_rows(group_rows, w);
        }
    };

    let vertices: Vec<VertexId> = chip.live_vertices().collect();
    let images = if opts.parallel {
        vertices
            .par_chunks(256)
            .map(|chunk| {
                let mut out = Vec::new();
                for &u in chunk {
                    place(u, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .concat()
    } else {
        let bound: usize = vertices
            .iter()
            .map(|&u| templates.get(&group.reduce(chip_coords[u as usize]).0).map_or(0, Vec::len))
            .sum();
        let mut out = Vec::with_capacity(bound);
        for &u in &vertices {
            place(u, &mut out);
        }
        out
    };
    Ok(MatchSet::from_raw(pattern.labels().to_vec(), images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chip::Defects;
    use crate::matching::vf2_match_chip;
    use crate::topology::{grid, heavy_hex, octagonal};

    fn path(n: u32) -> PatternGraph {
        PatternGraph::new(CouplingGraph::new(n as usize, (1..n).map(|i| (i - 1, i))).unwrap()).unwrap()
    }

    #[test]
    fn region_sizes() {
        let g = grid(7, 7).unwrap();
        assert_eq!(reduced_region(&path(1), &g).unwrap().order(), 1);
        assert_eq!(reduced_region(&path(3), &g).unwrap().order(), 5);
        let sizes: Vec<usize> =
            (3..6).map(|n| reduced_region(&path(5), &heavy_hex(n, n).unwrap()).unwrap().order()).collect();
        assert!(sizes.windows(2).all(|w| w[0] == w[1]), "{sizes:?}");
    }

    #[test]
    fn matches_vf2_on_small_chips() {
        for chip in [grid(2, 2).unwrap(), grid(7, 7).unwrap(), octagonal(2, 3).unwrap(), heavy_hex(2, 3).unwrap()] {
            for n in 1..=5 {
                let p = path(n);
                let a = sbsm_match(&p, &chip).unwrap();
                assert_eq!(a, vf2_match_chip(&p, &chip).unwrap(), "{} P{n}", chip.family());
                assert_eq!(a, sbsm_match_with(&p, &chip, SbsmOptions { parallel: true }).unwrap());
            }
        }
        assert_eq!(sbsm_match(&path(2), &grid(2, 2).unwrap()).unwrap().len(), 8);
    }

    #[test]
    fn defects_respected() {
        let chip = grid(5, 5).unwrap().with_defects(Defects { vertices: vec![12], edges: vec![(0, 1)] }).unwrap();
        assert!(!chip.is_induced_in_lattice());
        for n in 1..=4 {
            let p = path(n);
            assert_eq!(sbsm_match(&p, &chip).unwrap(), vf2_match_chip(&p, &chip).unwrap());
        }
    }

    #[test]
    fn oversized_pattern_does_not_fit() {
        // a star with 9 leaves has radius 1, so its region is a 5-site ball
        let star = CouplingGraph::new(10, (1..10).map(|i| (0, i))).unwrap();
        let err = sbsm_match(&PatternGraph::new(star).unwrap(), &grid(5, 5).unwrap());
        assert!(matches!(err, Err(Error::DoesNotFit(_))));
    }
}
