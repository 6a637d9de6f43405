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

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use symmap::{Chip, CouplingGraph, Defects, PatternGraph, VertexId};

pub fn pattern(n: usize, edges: &[(u32, u32)]) -> PatternGraph {
    PatternGraph::new(CouplingGraph::new(n, edges.iter().copied()).unwrap()).unwrap()
}

pub fn path(n: u32) -> PatternGraph {
    PatternGraph::new(CouplingGraph::new(n as usize, (1..n).map(|i| (i - 1, i))).unwrap()).unwrap()
}

pub fn star(leaves: u32) -> PatternGraph {
    PatternGraph::new(CouplingGraph::new(leaves as usize + 1, (1..=leaves).map(|i| (0, i))).unwrap()).unwrap()
}

pub fn cycle(n: u32) -> PatternGraph {
    PatternGraph::new(CouplingGraph::new(n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap()).unwrap()
}

/// Random connected graph: a random tree plus a few extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: u32, extra: usize) -> PatternGraph {
    let mut edges: Vec<(u32, u32)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    pattern(n as usize, &edges)
}

/// Paths, stars, cycles and random shapes, keeping only those whose max
/// degree fits `max_degree`.
pub fn corpus<R: Rng>(rng: &mut R, max_degree: usize, random: usize) -> Vec<(String, PatternGraph)> {
    let mut out: Vec<(String, PatternGraph)> = Vec::new();
    for n in 2..=6 {
        out.push((format!("P{n}"), path(n)));
    }
    for k in 2..=4 {
        out.push((format!("K1,{k}"), star(k)));
    }
    for n in [4, 6, 8] {
        out.push((format!("C{n}"), cycle(n)));
    }
    let mut made = 0;
    while made < random {
        let n = rng.gen_range(3..=8);
        let extra = rng.gen_range(0..=2);
        let p = random_connected(rng, n, extra);
        if p.graph().max_degree() <= 3 {
            out.push((format!("random{made}"), p));
            made += 1;
        }
    }
    out.retain(|(_, p)| p.graph().max_degree() <= max_degree);
    out
}

/// Exhaustive search over injective assignments. Exponential; keep inputs
/// tiny.
pub fn brute_force(p: &PatternGraph, t: &CouplingGraph, alive: Option<&[bool]>) -> Vec<Vec<u32>> {
    fn rec(p: &PatternGraph, t: &CouplingGraph, alive: Option<&[bool]>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == p.order() {
            out.push(cur.clone());
            return;
        }
        let i = cur.len() as u32;
        for v in t.vertices() {
            if cur.contains(&v) || alive.is_some_and(|a| !a[v as usize]) {
                continue;
            }
            let ok = p.graph().neighbors(i).iter().filter(|&&j| j < i).all(|&j| t.has_edge(cur[j as usize], v));
            if ok {
                cur.push(v);
                rec(p, t, alive, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(p, t, alive, &mut Vec::new(), &mut out);
    out
}

/// `k` random dead qubits and `k` random dead couplers.
pub fn random_defects<R: Rng>(rng: &mut R, chip: &Chip, k: usize) -> Defects {
    let mut vs: Vec<VertexId> = chip.graph().vertices().collect();
    vs.shuffle(rng);
    let mut es = chip.graph().edges().to_vec();
    es.shuffle(rng);
    Defects { vertices: vs.into_iter().take(k).collect(), edges: es.into_iter().take(k).collect() }
}

/// Independent check that every row is an injective monomorphism into the
/// live chip.
pub fn assert_valid(p: &PatternGraph, chip: &Chip, rows: &symmap::MatchSet) {
    for row in rows.rows() {
        let mut seen = row.to_vec();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), row.len(), "not injective: {row:?}");
        assert!(row.iter().all(|&v| chip.is_live(v)), "dead qubit in {row:?}");
        for &(a, b) in p.graph().edges() {
            assert!(chip.live_graph().has_edge(row[a as usize], row[b as usize]), "edge missing in {row:?}");
        }
    }
}
