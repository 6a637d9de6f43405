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

//! Gate-list circuits and their interaction graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CouplingGraph, VertexId};
use crate::matching::PatternGraph;

/// Error class of a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    OneQ,
    TwoQ,
    Measure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub name: String,
    pub qubits: Vec<u32>,
}

impl Gate {
    pub fn new(name: impl Into<String>, qubits: &[u32]) -> Self {
        Gate { name: name.into(), qubits: qubits.to_vec() }
    }

    /// Measurement names (`measure`, `m`) win; otherwise arity decides.
    pub fn kind(&self) -> Result<GateKind> {
        let measure = matches!(self.name.to_ascii_lowercase().as_str(), "measure" | "m");
        match (measure, self.qubits.len()) {
            (true, 1) => Ok(GateKind::Measure),
            (false, 1) => Ok(GateKind::OneQ),
            (false, 2) => Ok(GateKind::TwoQ),
            (_, n) => Err(Error::invalid(format!("gate `{}` has unsupported arity {n}", self.name))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitFile", into = "CircuitFile")]
pub struct Circuit {
    num_qubits: u32,
    gates: Vec<Gate>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    num_qubits: u32,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = Error;

    fn try_from(f: CircuitFile) -> Result<Self> {
        Circuit::new(f.num_qubits, f.gates)
    }
}

impl From<Circuit> for CircuitFile {
    fn from(c: Circuit) -> Self {
        CircuitFile { num_qubits: c.num_qubits, gates: c.gates }
    }
}

impl Circuit {
    pub fn new(num_qubits: u32, gates: Vec<Gate>) -> Result<Self> {
        for (i, g) in gates.iter().enumerate() {
            g.kind().map_err(|e| Error::invalid(format!("gate {i}: {e}")))?;
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= num_qubits) {
                return Err(Error::invalid(format!(
                    "gate {i} (`{}`) acts on qubit {q} but the circuit has {num_qubits}",
                    g.name
                )));
            }
            if g.qubits.len() == 2 && g.qubits[0] == g.qubits[1] {
                return Err(Error::invalid(format!("gate {i} (`{}`) repeats qubit {}", g.name, g.qubits[0])));
            }
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Qubits touched by at least one gate, ascending.
    pub fn active_qubits(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.gates.iter().flat_map(|g| g.qubits.iter().copied()).collect();
        set.into_iter().collect()
    }

    /// Same circuit with gates reordered by `perm` (a permutation of gate
    /// indices).
    pub fn permuted(&self, perm: &[usize]) -> Result<Circuit> {
        let mut seen = vec![false; self.gates.len()];
        if perm.len() != self.gates.len() || perm.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::invalid("not a permutation of the gate list"));
        }
        Ok(Circuit { num_qubits: self.num_qubits, gates: perm.iter().map(|&i| self.gates[i].clone()).collect() })
    }
}

/// The graph on active qubits with an edge per interacting pair. Labels are
/// the logical qubit indices.
pub fn interaction_graph(c: &Circuit) -> Result<PatternGraph> {
    let labels = c.active_qubits();
    if labels.is_empty() {
        return Err(Error::invalid("circuit has no gates"));
    }
    let idx = |q: u32| labels.binary_search(&q).expect("active qubit") as VertexId;
    let edges = c
        .gates
        .iter()
        .filter(|g| g.qubits.len() == 2)
        .map(|g| {
            let (a, b) = (idx(g.qubits[0]), idx(g.qubits[1]));
            (a.min(b), a.max(b))
        })
        .collect::<BTreeSet<_>>();
    let graph = CouplingGraph::new(labels.len(), edges)?;
    PatternGraph::with_labels(graph, labels).map_err(|e| Error::invalid(format!("interaction graph: {e}")))
}

/// Five-qubit Deutsch-Jozsa circuit for a balanced oracle: the four input
/// qubits each control a CX onto qubit 4, so the interaction graph is a
/// star.
pub fn deutsch_jozsa_5() -> Circuit {
    let mut g = vec![Gate::new("x", &[4])];
    g.extend((0..5).map(|q| Gate::new("h", &[q])));
    g.extend((0..4).map(|q| Gate::new("cx", &[q, 4])));
    g.extend((0..4).map(|q| Gate::new("h", &[q])));
    g.extend((0..4).map(|q| Gate::new("measure", &[q])));
    Circuit::new(5, g).expect("fixture is valid")
}

/// The same algorithm routed onto a line: the ancilla is walked from qubit
/// 4 down to qubit 1 with SWAPs (three CX each), so only neighboring qubits
/// interact. Inputs end up on qubits 0, 2, 3 and 4.
pub fn deutsch_jozsa_5_path() -> Circuit {
    let cx = |a, b| Gate::new("cx", &[a, b]);
    let swap = |a, b| [cx(a, b), cx(b, a), cx(a, b)];
    let mut g = vec![Gate::new("x", &[4])];
    g.extend((0..5).map(|q| Gate::new("h", &[q])));
    for q in (1..4).rev() {
        g.push(cx(q, q + 1));
        g.extend(swap(q, q + 1));
    }
    g.push(cx(0, 1));
    for q in [0, 2, 3, 4] {
        g.push(Gate::new("h", &[q]));
    }
    for q in [0, 2, 3, 4] {
        g.push(Gate::new("measure", &[q]));
    }
    Circuit::new(5, g).expect("fixture is valid")
}
