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

//! Exhaustive VF2-style monomorphism search.
//!
//! Pattern vertices are visited in a fixed connected order; at each depth
//! the candidates are the unmatched target vertices in the terminal set
//! (neighbors of already matched vertices), pruned by adjacency and by the
//! usual look-ahead counts.

use super::{MatchSet, PatternGraph};
use crate::chip::Chip;
use crate::error::{Error, Result};
use crate::graph::{CouplingGraph, VertexId};

const NONE: VertexId = VertexId::MAX;

#[derive(Clone, Copy, Debug, Default)]
pub struct Vf2Options<'a> {
    /// Target vertices marked `false` are never used.
    pub alive: Option<&'a [bool]>,
    /// Restricts where the pattern vertex `pin.0` may land.
    pub pin: Option<(VertexId, &'a [VertexId])>,
}

/// All monomorphisms of `pattern` into `target`, in canonical order.
pub fn vf2_match(pattern: &PatternGraph, target: &CouplingGraph) -> Result<MatchSet> {
    vf2_match_with(pattern, target, Vf2Options::default())
}

/// All monomorphisms into the live part of `chip`.
pub fn vf2_match_chip(pattern: &PatternGraph, chip: &Chip) -> Result<MatchSet> {
    let opts = Vf2Options { alive: Some(chip.alive_mask()), pin: None };
    vf2_match_with(pattern, chip.live_graph(), opts)
}

pub fn vf2_match_with(pattern: &PatternGraph, target: &CouplingGraph, opts: Vf2Options<'_>) -> Result<MatchSet> {
    if let Some(mask) = opts.alive {
        if mask.len() != target.order() {
            return Err(Error::invalid("alive mask length differs from target order"));
        }
    }
    let p = pattern.graph();
    let order = search_order(p, opts.pin.map(|(v, _)| v))?;
    let k = p.order();
    let mut state = State {
        p,
        t: target,
        alive: opts.alive,
        order: &order,
        core1: vec![NONE; k],
        core2: vec![NONE; target.order()],
        t1: vec![0; k],
        t2: vec![0; target.order()],
        t2_members: Vec::new(),
        out: Vec::new(),
    };
    let roots: Vec<VertexId> = match opts.pin {
        Some((_, targets)) => {
            let mut r = targets.to_vec();
            r.sort_unstable();
            r.dedup();
            if let Some(&bad) = r.iter().find(|&&v| !target.contains(v)) {
                return Err(Error::UnknownVertex(bad));
            }
            r
        }
        None => target.vertices().collect(),
    };
    if k <= target.order() {
        for m in roots {
            if state.feasible(order[0], m) {
                state.descend(0, m);
            }
        }
    }
    let mut set = MatchSet::from_raw(pattern.labels().to_vec(), state.out);
    set.canonicalize();
    Ok(set)
}

/// Start at `root` (default: a maximum-degree vertex), then repeatedly take
/// the unvisited vertex with the most visited neighbors, breaking ties by
/// degree and then by smallest id.
fn search_order(p: &CouplingGraph, root: Option<VertexId>) -> Result<Vec<VertexId>> {
    let k = p.order();
    let deg = |v: VertexId| p.neighbors(v).len();
    let root = match root {
        Some(r) if !p.contains(r) => return Err(Error::UnknownVertex(r)),
        Some(r) => r,
        None => p.vertices().max_by_key(|&v| (deg(v), std::cmp::Reverse(v))).unwrap_or(0),
    };
    let mut order = vec![root];
    let mut placed = vec![false; k];
    let mut links = vec![0usize; k];
    placed[root as usize] = true;
    for &w in p.neighbors(root) {
        links[w as usize] += 1;
    }
    while order.len() < k {
        let next = p
            .vertices()
            .filter(|&v| !placed[v as usize] && links[v as usize] > 0)
            .max_by_key(|&v| (links[v as usize], deg(v), std::cmp::Reverse(v)))
            .ok_or_else(|| Error::invalid("pattern graph is disconnected"))?;
        placed[next as usize] = true;
        order.push(next);
        for &w in p.neighbors(next) {
            links[w as usize] += 1;
        }
    }
    Ok(order)
}

struct State<'a> {
    p: &'a CouplingGraph,
    t: &'a CouplingGraph,
    alive: Option<&'a [bool]>,
    order: &'a [VertexId],
    core1: Vec<VertexId>,
    core2: Vec<VertexId>,
    /// Depth (1-based) at which a vertex entered the terminal set; 0 if not.
    t1: Vec<u32>,
    t2: Vec<u32>,
    t2_members: Vec<VertexId>,
    out: Vec<VertexId>,
}

impl State<'_> {
    #[inline]
    fn usable(&self, m: VertexId) -> bool {
        self.core2[m as usize] == NONE && self.alive.is_none_or(|a| a[m as usize])
    }

    fn feasible(&self, n: VertexId, m: VertexId) -> bool {
        if !self.usable(m) || self.p.neighbors(n).len() > self.t.neighbors(m).len() {
            return false;
        }
        let (mut term1, mut rest1) = (0, 0);
        for &n2 in self.p.neighbors(n) {
            let img = self.core1[n2 as usize];
            if img != NONE {
                if !self.t.has_edge(m, img) {
                    return false;
                }
            } else if self.t1[n2 as usize] > 0 {
                term1 += 1;
            } else {
                rest1 += 1;
            }
        }
        let (mut term2, mut rest2) = (0, 0);
        for &m2 in self.t.neighbors(m) {
            if !self.usable(m2) {
                continue;
            }
            if self.t2[m2 as usize] > 0 {
                term2 += 1;
            } else {
                rest2 += 1;
            }
        }
        term1 <= term2 && term1 + rest1 <= term2 + rest2
    }

    fn descend(&mut self, depth: usize, m: VertexId) {
        let n = self.order[depth];
        let d = depth as u32 + 1;
        self.core1[n as usize] = m;
        self.core2[m as usize] = n;
        if depth + 1 == self.order.len() {
            self.out.extend_from_slice(&self.core1);
        } else {
            if self.t1[n as usize] == 0 {
                self.t1[n as usize] = d;
            }
            for &n2 in self.p.neighbors(n) {
                if self.t1[n2 as usize] == 0 {
                    self.t1[n2 as usize] = d;
                }
            }
            if self.t2[m as usize] == 0 {
                self.t2[m as usize] = d;
                self.t2_members.push(m);
            }
            for &m2 in self.t.neighbors(m) {
                if self.t2[m2 as usize] == 0 {
                    self.t2[m2 as usize] = d;
                    self.t2_members.push(m2);
                }
            }

            let next = self.order[depth + 1];
            let mut i = 0;
            while i < self.t2_members.len() {
                let cand = self.t2_members[i];
                i += 1;
                if self.feasible(next, cand) {
                    self.descend(depth + 1, cand);
                }
            }

            for &n2 in self.p.neighbors(n).iter().chain(std::iter::once(&n)) {
                if self.t1[n2 as usize] == d {
                    self.t1[n2 as usize] = 0;
                }
            }
            while let Some(&v) = self.t2_members.last() {
                if self.t2[v as usize] != d {
                    break;
                }
                self.t2[v as usize] = 0;
                self.t2_members.pop();
            }
        }
        self.core1[n as usize] = NONE;
        self.core2[m as usize] = NONE;
    }
}
