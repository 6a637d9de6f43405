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

//! Benchmark harness: times both matchers, both scorers and both end-to-end
//! pipelines on a ladder of chip sizes, after checking that each pair
//! agrees.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use symmap::{
    gaussian_error_map, mapomatic_pipeline, reduced_region, sbcm, sbsm_match, score_loop, score_vectorized,
    topology, vf2_match_chip, Chip, Circuit, CouplingGraph, ErrorMap, Family, Gate, GaussianParams, MatchSet,
    PatternGraph, Remap, ScoreVector,
};

use crate::{read_json, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Vf2,
    Sbsm,
    ScoreLoop,
    ScoreVec,
    MapomaticPipeline,
    SbcmPipeline,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Vf2 => "vf2",
            Algorithm::Sbsm => "sbsm",
            Algorithm::ScoreLoop => "score_loop",
            Algorithm::ScoreVec => "score_vec",
            Algorithm::MapomaticPipeline => "mapomatic_pipeline",
            Algorithm::SbcmPipeline => "sbcm_pipeline",
        })
    }
}

/// One CSV row. `pattern` is kept for grouping but not written.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub family: Family,
    pub n: usize,
    pub algorithm: Algorithm,
    pub wall_time_s: f64,
    pub matches: usize,
    pub reduced_region_size: Option<usize>,
    pub repetitions: usize,
    #[serde(skip_serializing)]
    pub pattern: String,
}

pub const CSV_HEADER: &str = "family,n,algorithm,wall_time_s,matches,reduced_region_size,repetitions";

/// A pattern to place and the circuit used to score its placements.
#[derive(Clone, Debug)]
pub struct Workload {
    pub name: String,
    pub pattern: PatternGraph,
    pub circuit: Circuit,
}

impl Workload {
    pub fn from_circuit(name: impl Into<String>, circuit: Circuit) -> Result<Self, CliError> {
        let pattern = symmap::interaction_graph(&circuit)?;
        Ok(Workload { name: name.into(), pattern, circuit })
    }

    /// Scores a bare pattern with a synthetic circuit: H on every qubit, one
    /// CX per edge, then a measurement on every qubit.
    pub fn from_pattern(name: impl Into<String>, pattern: PatternGraph) -> Result<Self, CliError> {
        let labels = pattern.labels();
        let mut gates: Vec<Gate> = labels.iter().map(|&q| Gate::new("h", &[q])).collect();
        gates.extend(
            pattern
                .graph()
                .edges()
                .iter()
                .map(|&(a, b)| Gate::new("cx", &[labels[a as usize], labels[b as usize]])),
        );
        gates.extend(labels.iter().map(|&q| Gate::new("measure", &[q])));
        let width = labels.last().map_or(0, |&q| q + 1);
        let circuit = Circuit::new(width, gates)?;
        Ok(Workload { name: name.into(), pattern, circuit })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<[u32; 2]>,
    pub workloads: Vec<Workload>,
    pub reps: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    families: Vec<Family>,
    sizes: Vec<[u32; 2]>,
    patterns: Vec<PathBuf>,
    reps: usize,
}

pub const MIN_REPS: usize = 5;

impl SuiteConfig {
    /// Loads a suite file. Pattern paths are relative to the suite file;
    /// each may hold a circuit (`{"num_qubits", "gates"}`) or a bare graph.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file: SuiteFile = read_json(path)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut workloads = Vec::new();
        for p in &file.patterns {
            let full = dir.join(p);
            let value: serde_json::Value = read_json(&full)?;
            let name = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
            let bad = |e: serde_json::Error| CliError::Data(format!("{}: {e}", full.display()));
            workloads.push(if value.get("gates").is_some() {
                Workload::from_circuit(name, serde_json::from_value(value).map_err(bad)?)?
            } else {
                let g: CouplingGraph = serde_json::from_value(value).map_err(bad)?;
                Workload::from_pattern(name, PatternGraph::new(g)?)?
            });
        }
        let config = SuiteConfig { families: file.families, sizes: file.sizes, workloads, reps: file.reps };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.reps < MIN_REPS {
            return Err(CliError::Data(format!("reps must be at least {MIN_REPS}, got {}", self.reps)));
        }
        if self.families.is_empty() || self.sizes.is_empty() || self.workloads.is_empty() {
            return Err(CliError::Data("suite needs at least one family, size and pattern".into()));
        }
        if self.families.contains(&Family::Custom) {
            return Err(CliError::Data("custom chips cannot be generated for a benchmark".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BenchOptions {
    /// Adds octagonal(105, 105) to the octagonal ladder.
    pub full: bool,
    pub parallel_validate: bool,
}

/// Median wall time of `reps` timed runs after one untimed warm-up, and the
/// last result.
pub fn time_median<T, E>(reps: usize, mut f: impl FnMut() -> Result<T, E>) -> Result<(f64, T), E> {
    let mut out = f()?;
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        out = f()?;
        times.push(t.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    let median = if times.len() % 2 == 1 { times[mid] } else { (times[mid - 1] + times[mid]) / 2.0 };
    Ok((median, out))
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn gate_failure(cell: &str, what: &str, detail: String) -> CliError {
    CliError::Data(format!("benchmark equality gate failed for {cell} ({what}): {detail}"))
}

fn compare_matches(cell: &str, a: &MatchSet, b: &MatchSet) -> Result<(), CliError> {
    if a == b {
        return Ok(());
    }
    let first = a.rows().zip(b.rows()).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len()));
    let sample = |m: &MatchSet| (first < m.len()).then(|| m.row(first).to_vec());
    Err(gate_failure(
        cell,
        "vf2 vs sbsm",
        format!("{} vs {} matches; first difference at row {first}: {:?} vs {:?}", a.len(), b.len(), sample(a), sample(b)),
    ))
}

fn compare_scores(cell: &str, a: &ScoreVector, b: &ScoreVector) -> Result<(), CliError> {
    if a.len() != b.len() {
        return Err(gate_failure(cell, "score_loop vs score_vec", format!("{} vs {} scores", a.len(), b.len())));
    }
    match a.iter().zip(b).position(|(x, y)| !rel_close(*x, *y)) {
        None => Ok(()),
        Some(i) => Err(gate_failure(cell, "score_loop vs score_vec", format!("row {i}: {} vs {}", a[i], b[i]))),
    }
}

fn compare_remaps(cell: &str, a: &Remap, b: &Remap) -> Result<(), CliError> {
    let same = a.scores.len() == b.scores.len()
        && a.scores.iter().zip(&b.scores).all(|(x, y)| x.mapping == y.mapping && rel_close(x.score, y.score));
    if same {
        Ok(())
    } else {
        Err(gate_failure(
            cell,
            "mapomatic vs sbcm",
            format!("best {:?} ({}) vs {:?} ({})", a.best.mapping, a.best.score, b.best.mapping, b.best.score),
        ))
    }
}

struct CellOutputs {
    vf2: MatchSet,
    sbsm: MatchSet,
    scores: Option<(ScoreVector, ScoreVector)>,
    pipelines: Option<(Remap, Remap)>,
}

fn validate(cell: &str, out: &CellOutputs, parallel: bool) -> Result<(), CliError> {
    let checks: Vec<Box<dyn Fn() -> Result<(), CliError> + Send + Sync + '_>> = vec![
        Box::new(|| compare_matches(cell, &out.vf2, &out.sbsm)),
        Box::new(|| out.scores.as_ref().map_or(Ok(()), |(l, v)| compare_scores(cell, l, v))),
        Box::new(|| out.pipelines.as_ref().map_or(Ok(()), |(m, s)| compare_remaps(cell, m, s))),
    ];
    if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = checks.iter().map(|c| s.spawn(c)).collect();
            handles.into_iter().try_for_each(|h| h.join().expect("validation thread panicked"))
        })
    } else {
        checks.iter().try_for_each(|c| c())
    }
}

fn bench_cell(
    family: Family,
    chip: &Chip,
    w: &Workload,
    errors: &ErrorMap,
    reps: usize,
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>, CliError> {
    let n = chip.order();
    let cell = format!("{family} n={n} pattern={}", w.name);
    let record = |algorithm, wall_time_s, matches, reduced_region_size| BenchRecord {
        family,
        n,
        algorithm,
        wall_time_s,
        matches,
        reduced_region_size,
        repetitions: reps,
        pattern: w.name.clone(),
    };
    let mut rows = Vec::new();

    let (t_vf2, vf2) = time_median(reps, || vf2_match_chip(&w.pattern, chip))?;
    let (t_sbsm, sbsm) = match time_median(reps, || sbsm_match(&w.pattern, chip)) {
        Err(symmap::Error::DoesNotFit(_)) => (0.0, MatchSet::new(w.pattern.labels().to_vec())?),
        r => r?,
    };
    let region = reduced_region(&w.pattern, chip)?.order();
    rows.push(record(Algorithm::Vf2, t_vf2, vf2.len(), None));
    rows.push(record(Algorithm::Sbsm, t_sbsm, sbsm.len(), Some(region)));

    let mut out = CellOutputs { vf2, sbsm, scores: None, pipelines: None };
    if !out.sbsm.is_empty() {
        let (t_loop, l) = time_median(reps, || score_loop(&out.sbsm, &w.circuit, errors))?;
        let (t_vec, v) = time_median(reps, || score_vectorized(&out.sbsm, &w.circuit, errors))?;
        rows.push(record(Algorithm::ScoreLoop, t_loop, out.sbsm.len(), None));
        rows.push(record(Algorithm::ScoreVec, t_vec, out.sbsm.len(), None));
        let (t_map, m) = time_median(reps, || mapomatic_pipeline(&w.circuit, chip, errors))?;
        let (t_sbcm, s) = time_median(reps, || sbcm(&w.circuit, chip, errors))?;
        rows.push(record(Algorithm::MapomaticPipeline, t_map, m.scores.len(), None));
        rows.push(record(Algorithm::SbcmPipeline, t_sbcm, s.scores.len(), None));
        out.scores = Some((l, v));
        out.pipelines = Some((m, s));
    }
    validate(&cell, &out, opts.parallel_validate)?;
    Ok(rows)
}

/// Runs every (family, size, workload) cell in order. Cells run one at a
/// time; each cell's records are only kept once its equality checks pass.
pub fn run_bench(config: &SuiteConfig, opts: &BenchOptions) -> Result<Vec<BenchRecord>, CliError> {
    config.validate()?;
    let mut records = Vec::new();
    for &family in &config.families {
        let mut sizes = config.sizes.clone();
        if opts.full && family == Family::Octagonal && !sizes.contains(&[105, 105]) {
            sizes.push([105, 105]);
        }
        for &[r, c] in &sizes {
            let chip = topology::generate(family, r, c)?;
            let errors = gaussian_error_map(&chip, &GaussianParams::default())?;
            for w in &config.workloads {
                records.extend(bench_cell(family, &chip, w, &errors, config.reps, opts)?);
            }
        }
    }
    Ok(records)
}

pub fn to_csv(records: &[BenchRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(|e| CliError::Data(e.to_string()))?;
    }
    for r in records {
        w.serialize(r).map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Data(e.to_string()))
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, t)| (n.ln(), t.max(1e-12).ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Slope {
    pub family: Family,
    pub pattern: String,
    pub algorithm: Algorithm,
    pub slope: f64,
}

/// Runtime slope per (family, pattern, algorithm) over the three largest
/// chip sizes.
pub fn slopes(records: &[BenchRecord]) -> Vec<Slope> {
    let mut keys: Vec<(Family, String, Algorithm)> =
        records.iter().map(|r| (r.family, r.pattern.clone(), r.algorithm)).collect();
    keys.dedup();
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for key in keys {
        if seen.contains(&key) {
            continue;
        }
        seen.push(key.clone());
        let mut pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| (r.family, &r.pattern, r.algorithm) == (key.0, &key.1, key.2))
            .map(|r| (r.n as f64, r.wall_time_s))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let top = &pts[pts.len().saturating_sub(3)..];
        if let Some(slope) = loglog_slope(top) {
            out.push(Slope { family: key.0, pattern: key.1, algorithm: key.2, slope });
        }
    }
    out
}
