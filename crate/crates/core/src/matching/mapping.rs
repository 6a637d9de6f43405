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

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Injective map from pattern labels to target vertices, sorted by label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    pairs: Vec<(VertexId, VertexId)>,
}

impl Mapping {
    pub fn new(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("pattern vertex {} is mapped twice", w[0].0)));
        }
        let mut seen = BTreeSet::new();
        for &(p, t) in &pairs {
            if !seen.insert(t) {
                return Err(Error::invalid(format!(
                    "mapping is not injective: target {t} is hit again by {p}"
                )));
            }
        }
        Ok(Mapping { pairs })
    }

    pub fn identity(labels: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        Self::new(labels.into_iter().map(|q| (q, q)))
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, label: VertexId) -> Option<VertexId> {
        self.pairs
            .binary_search_by_key(&label, |&(p, _)| p)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn domain(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn images(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.pairs.iter().map(|&(_, t)| t)
    }
}

/// `outer . inner`: sends `q` to `outer(inner(q))`. Every image of `inner`
/// must be in the domain of `outer`.
pub fn compose(outer: &Mapping, inner: &Mapping) -> Result<Mapping> {
    Mapping::new(inner.pairs.iter().map(|&(q, mid)| {
        outer.get(mid).map(|t| (q, t)).ok_or_else(|| {
            Error::invalid(format!("vertex {mid} is not in the domain of the outer mapping"))
        })
    }).collect::<Result<Vec<_>>>()?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    map: Vec<[VertexId; 2]>,
}

impl Serialize for Mapping {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MappingFile { map: self.pairs.iter().map(|&(p, t)| [p, t]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mapping {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = MappingFile::deserialize(d)?;
        Mapping::new(f.map.into_iter().map(|[p, t]| (p, t))).map_err(D::Error::custom)
    }
}

/// A list of mappings over a shared domain, stored as one row of images per
/// mapping (columns in domain order).
///
/// Canonical order is lexicographic on image rows, without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchSet {
    domain: Vec<VertexId>,
    images: Vec<VertexId>,
}

impl MatchSet {
    /// Empty set over `domain` (strictly increasing labels).
    pub fn new(domain: Vec<VertexId>) -> Result<Self> {
        if domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("match-set domain must be strictly increasing"));
        }
        Ok(MatchSet { domain, images: Vec::new() })
    }

    pub(crate) fn from_raw(domain: Vec<VertexId>, images: Vec<VertexId>) -> Self {
        debug_assert!(domain.is_empty() && images.is_empty() || images.len().is_multiple_of(domain.len()));
        MatchSet { domain, images }
    }

    /// Collects mappings that all share `domain`. The input order is kept.
    pub fn from_mappings(domain: Vec<VertexId>, maps: impl IntoIterator<Item = Mapping>) -> Result<Self> {
        let mut set = Self::new(domain)?;
        for m in maps {
            if !m.domain().eq(set.domain.iter().copied()) {
                return Err(Error::invalid("mapping domain differs from the match-set domain"));
            }
            set.images.extend(m.images());
        }
        Ok(set)
    }

    pub fn domain(&self) -> &[VertexId] {
        &self.domain
    }

    pub fn width(&self) -> usize {
        self.domain.len()
    }

    pub fn len(&self) -> usize {
        match self.width() {
            0 => 0,
            w => self.images.len() / w,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Images of mapping `i`, one per domain label.
    pub fn row(&self, i: usize) -> &[VertexId] {
        let w = self.width();
        &self.images[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[VertexId]> + '_ {
        self.images.chunks_exact(self.width().max(1))
    }

    /// All images, row-major.
    pub fn images(&self) -> &[VertexId] {
        &self.images
    }

    /// Appends one row. Injectivity is not re-checked.
    pub fn push_row(&mut self, row: &[VertexId]) -> Result<()> {
        if row.len() != self.width() || row.is_empty() {
            return Err(Error::invalid(format!("row of width {} for domain of width {}", row.len(), self.width())));
        }
        self.images.extend_from_slice(row);
        Ok(())
    }

    pub fn mapping(&self, i: usize) -> Mapping {
        Mapping { pairs: self.domain.iter().copied().zip(self.row(i).iter().copied()).collect() }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Mapping> + '_ {
        (0..self.len()).map(|i| self.mapping(i))
    }

    /// Position of `label` in the domain.
    pub fn column(&self, label: VertexId) -> Option<usize> {
        self.domain.binary_search(&label).ok()
    }

    /// Sorts rows lexicographically and drops duplicates.
    pub fn canonicalize(&mut self) {
        let w = self.width();
        if w == 0 || self.len() <= 1 {
            return;
        }
        let n = self.len();
        let max_first = self.images.iter().step_by(w).copied().max().unwrap_or(0) as usize;
        if max_first <= 4 * n + 1024 {
            // bucket by first column, then sort the (short) buckets
            let mut start = vec![0usize; max_first + 2];
            for row in self.images.chunks_exact(w) {
                start[row[0] as usize + 1] += 1;
            }
            for i in 1..start.len() {
                start[i] += start[i - 1];
            }
            let mut next = start.clone();
            let mut sorted = vec![0; self.images.len()];
            for row in self.images.chunks_exact(w) {
                let at = &mut next[row[0] as usize];
                sorted[*at * w..(*at + 1) * w].copy_from_slice(row);
                *at += 1;
            }
            for b in start.windows(2) {
                if b[1] - b[0] > 1 {
                    sort_rows(&mut sorted[b[0] * w..b[1] * w], w);
                }
            }
            self.images = sorted;
        } else {
            sort_rows(&mut self.images, w);
        }
        dedup_rows(&mut self.images, w);
    }

    pub fn is_canonical(&self) -> bool {
        let rows: Vec<&[VertexId]> = self.rows().collect();
        rows.windows(2).all(|p| p[0] < p[1])
    }

    /// Rewrites every row as `row . l_pre`: the new domain is the domain of
    /// `l_pre`, and label `q` goes to the old image of `l_pre(q)`. Row order
    /// is kept.
    pub fn precompose(&self, l_pre: &Mapping) -> Result<MatchSet> {
        let cols = l_pre
            .images()
            .map(|mid| {
                self.column(mid).ok_or_else(|| {
                    Error::invalid(format!("vertex {mid} is not in the match-set domain"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let domain: Vec<VertexId> = l_pre.domain().collect();
        if cols.iter().copied().eq(0..self.width()) {
            return Ok(MatchSet { domain, images: self.images.clone() });
        }
        let mut images = Vec::with_capacity(self.len() * cols.len());
        for row in self.rows().take(self.len()) {
            images.extend(cols.iter().map(|&c| row[c]));
        }
        Ok(MatchSet { domain, images })
    }
}

pub(super) fn sort_rows(flat: &mut [VertexId], w: usize) {
    macro_rules! fixed {
        ($($n:literal)*) => {
            match w {
                $($n => flat.as_chunks_mut::<$n>().0.sort_unstable(),)*
                _ => {
                    let mut rows: Vec<Vec<VertexId>> = flat.chunks_exact(w).map(<[_]>::to_vec).collect();
                    rows.sort_unstable();
                    for (dst, src) in flat.chunks_exact_mut(w).zip(rows) {
                        dst.copy_from_slice(&src);
                    }
                }
            }
        };
    }
    fixed!(1 2 3 4 5 6 7 8);
}

fn dedup_rows(flat: &mut Vec<VertexId>, w: usize) {
    let n = flat.len() / w;
    let mut kept = 1;
    for i in 1..n {
        if flat[i * w..(i + 1) * w] != flat[(kept - 1) * w..kept * w] {
            flat.copy_within(i * w..(i + 1) * w, kept * w);
            kept += 1;
        }
    }
    flat.truncate(kept * w);
}

impl Serialize for MatchSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for m in self.iter() {
            seq.serialize_element(&m)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for MatchSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let maps: Vec<Mapping> = Vec::deserialize(d)?;
        let domain = maps.first().map(|m| m.domain().collect()).unwrap_or_default();
        MatchSet::from_mappings(domain, maps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(w: usize, rows: &[&[u32]]) -> MatchSet {
        let mut s = MatchSet::new((0..w as u32).collect()).unwrap();
        for r in rows {
            s.push_row(r).unwrap();
        }
        s
    }

    #[test]
    fn mapping_rejects_non_injective() {
        assert!(Mapping::new([(0, 5), (1, 5)]).is_err());
        assert!(Mapping::new([(0, 5), (0, 6)]).is_err());
        let m = Mapping::new([(2, 7), (0, 5)]).unwrap();
        assert_eq!(m.pairs(), &[(0, 5), (2, 7)]);
        assert_eq!(m.get(2), Some(7));
        assert_eq!(m.get(1), None);
    }

    #[test]
    fn compose_mappings() {
        let l = Mapping::new([(0, 10), (1, 11), (2, 12)]).unwrap();
        let pre = Mapping::new([(0, 2), (1, 0)]).unwrap();
        assert_eq!(compose(&l, &pre).unwrap().pairs(), &[(0, 12), (1, 10)]);
        assert_eq!(compose(&l, &Mapping::identity(0..3).unwrap()).unwrap(), l);
        assert!(compose(&l, &Mapping::new([(0, 3)]).unwrap()).is_err());
    }

    #[test]
    fn canonicalize_sorts_and_dedups() {
        for w in [1usize, 3, 9] {
            let mut rows: Vec<Vec<u32>> = (0..40u32).map(|i| (0..w as u32).map(|j| (i * 7 + j * 3) % 11).collect()).collect();
            rows.extend(rows.clone());
            let refs: Vec<&[u32]> = rows.iter().map(Vec::as_slice).collect();
            let mut s = set(w, &refs);
            s.canonicalize();
            let mut expect = rows.clone();
            expect.sort();
            expect.dedup();
            assert_eq!(s.rows().map(<[_]>::to_vec).collect::<Vec<_>>(), expect, "width {w}");
            assert!(s.is_canonical());
        }
    }

    #[test]
    fn canonicalize_sparse_first_column() {
        let mut s = set(2, &[&[4_000_000, 1], &[3, 2], &[4_000_000, 0], &[3, 2]]);
        s.canonicalize();
        assert_eq!(s.images(), &[3, 2, 4_000_000, 0, 4_000_000, 1]);
    }

    #[test]
    fn precompose_reorders_columns() {
        let s = set(3, &[&[10, 11, 12], &[20, 21, 22]]);
        let same = s.precompose(&Mapping::identity(0..3).unwrap()).unwrap();
        assert_eq!(same, s);
        let swapped = s.precompose(&Mapping::new([(0, 2), (1, 0)]).unwrap()).unwrap();
        assert_eq!(swapped.images(), &[12, 10, 22, 20]);
    }

    #[test]
    fn json_format() {
        let s = MatchSet::from_raw(vec![0, 2], vec![5, 6, 7, 8]);
        let txt = serde_json::to_string(&s).unwrap();
        assert_eq!(txt, r#"[{"map":[[0,5],[2,6]]},{"map":[[0,7],[2,8]]}]"#);
        let back: MatchSet = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, s);
        let empty: MatchSet = serde_json::from_str("[]").unwrap();
        assert!(empty.is_empty());
        assert!(serde_json::from_str::<MatchSet>(r#"[{"map":[[0,1]]},{"map":[[1,1]]}]"#).is_err());
    }
}
