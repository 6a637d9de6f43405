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

//! Calibration data: per-qubit and per-coupler error rates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chip::Chip;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::symmetry::bounding_box;

pub type Edge = (VertexId, VertexId);

/// Single-qubit (`e1`), two-qubit (`e2`) and readout (`em`) error rates.
/// Edge keys are stored with the smaller endpoint first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorMap {
    e1: BTreeMap<VertexId, f64>,
    e2: BTreeMap<Edge, f64>,
    em: BTreeMap<VertexId, f64>,
}

fn check_rate(kind: &str, key: &dyn std::fmt::Display, rate: f64) -> Result<()> {
    if (0.0..1.0).contains(&rate) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{kind} rate {rate} for {key} is outside [0, 1)")))
    }
}

fn edge_key(u: VertexId, v: VertexId) -> Edge {
    (u.min(v), u.max(v))
}

impl ErrorMap {
    pub fn new(
        e1: BTreeMap<VertexId, f64>,
        e2: impl IntoIterator<Item = (Edge, f64)>,
        em: BTreeMap<VertexId, f64>,
    ) -> Result<Self> {
        let mut map = ErrorMap { e1, e2: BTreeMap::new(), em };
        for ((u, v), rate) in e2 {
            if u == v {
                return Err(Error::invalid(format!("e2 key {u}-{v} is a self-loop")));
            }
            if map.e2.insert(edge_key(u, v), rate).is_some() {
                return Err(Error::invalid(format!("duplicate e2 key {}-{}", u.min(v), u.max(v))));
            }
        }
        for (v, &r) in &map.e1 {
            check_rate("e1", v, r)?;
        }
        for (v, &r) in &map.em {
            check_rate("em", v, r)?;
        }
        for (&(u, v), &r) in &map.e2 {
            check_rate("e2", &format_args!("{u}-{v}"), r)?;
        }
        Ok(map)
    }

    /// Every live qubit and coupler of `chip` at the same rate.
    pub fn uniform(chip: &Chip, rate: f64) -> Result<Self> {
        Self::from_fn(chip, |_| rate, |_, _| rate, |_| rate)
    }

    fn from_fn(
        chip: &Chip,
        e1: impl Fn(VertexId) -> f64,
        e2: impl Fn(VertexId, VertexId) -> f64,
        em: impl Fn(VertexId) -> f64,
    ) -> Result<Self> {
        let live: Vec<VertexId> = chip.live_vertices().collect();
        Self::new(
            live.iter().map(|&v| (v, e1(v))).collect(),
            chip.live_graph().edges().iter().map(|&(u, v)| ((u, v), e2(u, v))),
            live.iter().map(|&v| (v, em(v))).collect(),
        )
    }

    pub fn e1(&self, v: VertexId) -> Option<f64> {
        self.e1.get(&v).copied()
    }

    pub fn e2(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.e2.get(&edge_key(u, v)).copied()
    }

    pub fn em(&self, v: VertexId) -> Option<f64> {
        self.em.get(&v).copied()
    }

    pub fn e1_rates(&self) -> &BTreeMap<VertexId, f64> {
        &self.e1
    }

    pub fn e2_rates(&self) -> &BTreeMap<Edge, f64> {
        &self.e2
    }

    pub fn em_rates(&self) -> &BTreeMap<VertexId, f64> {
        &self.em
    }

    /// Keys must be exactly the live qubits (`e1`, `em`) and live couplers
    /// (`e2`) of `chip`.
    pub fn validate_for(&self, chip: &Chip) -> Result<()> {
        let live: Vec<VertexId> = chip.live_vertices().collect();
        for (name, keys) in [("e1", &self.e1), ("em", &self.em)] {
            if !keys.keys().copied().eq(live.iter().copied()) {
                let missing = live.iter().find(|v| !keys.contains_key(v));
                let extra = keys.keys().find(|v| !chip.is_live(**v));
                return Err(Error::invalid(format!(
                    "{name} keys do not match live qubits (missing {missing:?}, unexpected {extra:?})"
                )));
            }
        }
        if !self.e2.keys().copied().eq(chip.live_graph().edges().iter().copied()) {
            let missing = chip.live_graph().edges().iter().find(|e| !self.e2.contains_key(e));
            let extra = self.e2.keys().find(|&&(u, v)| !chip.live_graph().has_edge(u, v));
            return Err(Error::invalid(format!(
                "e2 keys do not match live couplers (missing {missing:?}, unexpected {extra:?})"
            )));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErrorMapFile {
    e1: BTreeMap<VertexId, f64>,
    e2: BTreeMap<String, f64>,
    em: BTreeMap<VertexId, f64>,
}

fn parse_edge_key(key: &str) -> Result<Edge> {
    let bad = || Error::invalid(format!("e2 key `{key}` is not of the form `u-v`"));
    let (u, v) = key.split_once('-').ok_or_else(bad)?;
    let u: VertexId = u.trim().parse().map_err(|_| bad())?;
    let v: VertexId = v.trim().parse().map_err(|_| bad())?;
    if u >= v {
        return Err(Error::invalid(format!("e2 key `{key}` must have u < v")));
    }
    Ok((u, v))
}

impl Serialize for ErrorMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ErrorMapFile {
            e1: self.e1.clone(),
            e2: self.e2.iter().map(|(&(u, v), &r)| (format!("{u}-{v}"), r)).collect(),
            em: self.em.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ErrorMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = ErrorMapFile::deserialize(d)?;
        let e2 = f
            .e2
            .iter()
            .map(|(k, &r)| parse_edge_key(k).map(|e| (e, r)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ErrorMap::new(f.e1, e2, f.em).map_err(D::Error::custom)
    }
}

/// Parameters of the radial error profile
/// `e(p) = e_min + (e_max - e_min) * (1 - exp(-|p - center|^2 / (2 sigma^2)))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    pub e_min: f64,
    pub e_max: f64,
    /// Defaults to a quarter of the coordinate bounding-box diagonal.
    pub sigma: Option<f64>,
    /// Defaults to the coordinate centroid.
    pub center: Option<(f64, f64)>,
    /// Readout error is the profile value times this factor.
    pub readout_scale: f64,
}

impl Default for GaussianParams {
    fn default() -> Self {
        GaussianParams { e_min: 0.001, e_max: 0.05, sigma: None, center: None, readout_scale: 2.0 }
    }
}

/// Error rates that grow with distance from `center`. Qubit rates are taken
/// at the qubit, coupler rates at the coupler midpoint.
pub fn gaussian_error_map(chip: &Chip, params: &GaussianParams) -> Result<ErrorMap> {
    let GaussianParams { e_min, e_max, sigma, center, readout_scale } = *params;
    if !(0.0 <= e_min && e_min <= e_max && e_max < 1.0) {
        return Err(Error::invalid(format!("need 0 <= e_min <= e_max < 1, got {e_min}, {e_max}")));
    }
    if !(readout_scale >= 0.0 && readout_scale.is_finite()) {
        return Err(Error::invalid(format!("readout scale {readout_scale} must be non-negative")));
    }
    let coords = chip.graph().coords().unwrap_or(&[]);
    let sigma = match sigma {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => return Err(Error::invalid(format!("sigma {s} must be positive"))),
        None => {
            let (lo, hi) = if coords.is_empty() { Default::default() } else { bounding_box(coords) };
            let diag = ((hi.x - lo.x) as f64).hypot((hi.y - lo.y) as f64);
            if diag > 0.0 {
                diag / 4.0
            } else {
                1.0
            }
        }
    };
    let (cx, cy) = center.unwrap_or_else(|| chip.centroid());
    let profile = |x: f64, y: f64| {
        let d2 = (x - cx).powi(2) + (y - cy).powi(2);
        e_min + (e_max - e_min) * (1.0 - (-d2 / (2.0 * sigma * sigma)).exp())
    };
    let at = |v: VertexId| {
        let c = coords[v as usize];
        profile(c.x as f64, c.y as f64)
    };
    let mid = |u: VertexId, v: VertexId| {
        let (a, b) = (coords[u as usize], coords[v as usize]);
        profile((a.x + b.x) as f64 / 2.0, (a.y + b.y) as f64 / 2.0)
    };
    ErrorMap::from_fn(chip, at, mid, |v| readout_scale * at(v))
}
