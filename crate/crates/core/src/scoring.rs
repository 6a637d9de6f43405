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

//! Fidelity estimates: the product over gates of `1 - error rate` at each
//! gate's physical location.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::error_map::ErrorMap;
use crate::graph::VertexId;
use crate::matching::MatchSet;

/// One estimated fidelity per mapping, index-aligned with the match set.
pub type ScoreVector = Vec<f64>;

fn missing(what: &str, at: String) -> Error {
    Error::invalid(format!("error map has no {what} rate for {at}"))
}

/// Gate operands as match-set columns.
fn resolve(mappings: &MatchSet, c: &Circuit) -> Result<Vec<(GateKind, usize, usize)>> {
    let col = |q: u32| {
        mappings
            .column(q)
            .ok_or_else(|| Error::invalid(format!("mappings do not cover circuit qubit {q}")))
    };
    c.gates()
        .iter()
        .map(|g| {
            let kind = g.kind()?;
            let a = col(g.qubits[0])?;
            let b = if kind == GateKind::TwoQ { col(g.qubits[1])? } else { a };
            Ok((kind, a, b))
        })
        .collect()
}

/// Scores one mapping at a time with map lookups per gate.
pub fn score_loop(mappings: &MatchSet, c: &Circuit, e: &ErrorMap) -> Result<ScoreVector> {
    if mappings.is_empty() {
        return Ok(Vec::new());
    }
    resolve(mappings, c)?;
    let mut scores = Vec::with_capacity(mappings.len());
    for m in mappings.iter() {
        let mut s = 1.0;
        for g in c.gates() {
            let q = m.get(g.qubits[0]).expect("resolved");
            let rate = match g.kind()? {
                GateKind::OneQ => e.e1(q).ok_or_else(|| missing("e1", format!("qubit {q}")))?,
                GateKind::Measure => e.em(q).ok_or_else(|| missing("em", format!("qubit {q}")))?,
                GateKind::TwoQ => {
                    let r = m.get(g.qubits[1]).expect("resolved");
                    e.e2(q, r).ok_or_else(|| missing("e2", format!("coupler {}-{}", q.min(r), q.max(r))))?
                }
            };
            s *= 1.0 - rate;
        }
        scores.push(s);
    }
    Ok(scores)
}

/// Error rates in flat arrays indexed by vertex.
struct DenseErrors {
    e1: Vec<f64>,
    em: Vec<f64>,
    e2_start: Vec<usize>,
    e2: Vec<(VertexId, f64)>,
}

impl DenseErrors {
    fn new(e: &ErrorMap) -> Self {
        let top = e
            .e1_rates()
            .keys()
            .chain(e.em_rates().keys())
            .copied()
            .chain(e.e2_rates().keys().map(|&(_, v)| v))
            .max()
            .map_or(0, |v| v as usize + 1);
        let mut e1 = vec![f64::NAN; top];
        let mut em = vec![f64::NAN; top];
        for (&v, &r) in e.e1_rates() {
            e1[v as usize] = r;
        }
        for (&v, &r) in e.em_rates() {
            em[v as usize] = r;
        }
        let mut e2_start = vec![0usize; top + 1];
        for &(u, v) in e.e2_rates().keys() {
            e2_start[u as usize + 1] += 1;
            e2_start[v as usize + 1] += 1;
        }
        for i in 1..e2_start.len() {
            e2_start[i] += e2_start[i - 1];
        }
        let mut fill = e2_start.clone();
        let mut e2 = vec![(0, 0.0); e2_start[top]];
        for (&(u, v), &r) in e.e2_rates() {
            e2[fill[u as usize]] = (v, r);
            fill[u as usize] += 1;
            e2[fill[v as usize]] = (u, r);
            fill[v as usize] += 1;
        }
        DenseErrors { e1, em, e2_start, e2 }
    }

    #[inline]
    fn vertex(table: &[f64], v: VertexId) -> f64 {
        table.get(v as usize).copied().unwrap_or(f64::NAN)
    }

    #[inline]
    fn edge(&self, u: VertexId, v: VertexId) -> f64 {
        let Some(&lo) = self.e2_start.get(u as usize) else {
            return f64::NAN;
        };
        let hi = self.e2_start[u as usize + 1];
        self.e2[lo..hi].iter().find(|&&(w, _)| w == v).map_or(f64::NAN, |&(_, r)| r)
    }
}

/// Gate-by-gate bulk update over the whole mapping axis: each gate gathers
/// its rate for every mapping into one contiguous vector `E'`, then folds
/// `S <- S * (1 - E')`. Produces exactly the values of [`score_loop`].
pub fn score_vectorized(mappings: &MatchSet, c: &Circuit, e: &ErrorMap) -> Result<ScoreVector> {
    if mappings.is_empty() {
        return Ok(Vec::new());
    }
    let gates = resolve(mappings, c)?;
    let dense = DenseErrors::new(e);
    let mut s = vec![1.0; mappings.len()];
    score_block(mappings, 0, &gates, &dense, &mut s)?;
    Ok(s)
}

/// [`score_vectorized`] with the mapping axis split across the rayon pool.
pub fn score_vectorized_parallel(mappings: &MatchSet, c: &Circuit, e: &ErrorMap) -> Result<ScoreVector> {
    const CHUNK: usize = 1 << 14;
    if mappings.is_empty() {
        return Ok(Vec::new());
    }
    let gates = resolve(mappings, c)?;
    let dense = DenseErrors::new(e);
    let mut s = vec![1.0; mappings.len()];
    s.par_chunks_mut(CHUNK)
        .enumerate()
        .try_for_each(|(i, block)| score_block(mappings, i * CHUNK, &gates, &dense, block))?;
    Ok(s)
}

fn score_block(
    mappings: &MatchSet,
    first: usize,
    gates: &[(GateKind, usize, usize)],
    dense: &DenseErrors,
    s: &mut [f64],
) -> Result<()> {
    let w = mappings.width();
    let images = &mappings.images()[first * w..(first + s.len()) * w];
    // gathered columns are reused by repeated gates on the same operands
    let mut cache: HashMap<(GateKind, usize, usize), Vec<f64>> = HashMap::new();
    for &key in gates {
        let col = match cache.entry(key) {
            std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
            std::collections::hash_map::Entry::Vacant(slot) => slot.insert(gather(key, images, w, dense)?),
        };
        for (x, &r) in s.iter_mut().zip(col.iter()) {
            *x *= 1.0 - r;
        }
    }
    Ok(())
}

fn gather((kind, a, b): (GateKind, usize, usize), images: &[VertexId], w: usize, dense: &DenseErrors) -> Result<Vec<f64>> {
    let rows = images.chunks_exact(w);
    let col: Vec<f64> = match kind {
        GateKind::OneQ => rows.map(|r| DenseErrors::vertex(&dense.e1, r[a])).collect(),
        GateKind::Measure => rows.map(|r| DenseErrors::vertex(&dense.em, r[a])).collect(),
        GateKind::TwoQ => rows.map(|r| dense.edge(r[a], r[b])).collect(),
    };
    if let Some(i) = col.iter().position(|r| r.is_nan()) {
        let r = &images[i * w..(i + 1) * w];
        return Err(match kind {
            GateKind::OneQ => missing("e1", format!("qubit {}", r[a])),
            GateKind::Measure => missing("em", format!("qubit {}", r[a])),
            GateKind::TwoQ => missing("e2", format!("coupler {}-{}", r[a].min(r[b]), r[a].max(r[b]))),
        });
    }
    Ok(col)
}
