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

//! Command-line front end for `symmap`.
//!
//! Exit codes: 0 success, 1 usage error, 2 bad input data, 3 the circuit
//! does not fit the topology.

pub mod bench;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use symmap::{
    gaussian_error_map, mapomatic_pipeline, sbcm_with, sbsm_match, score_loop, score_vectorized, topology,
    vf2_match_chip, Chip, Circuit, Defects, ErrorMap, Family, GaussianParams, MatchSet, PatternGraph, RemapOptions,
    ScoredMapping,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    DoesNotFit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::DoesNotFit(_) => 3,
        }
    }
}

impl From<symmap::Error> for CliError {
    fn from(e: symmap::Error) -> Self {
        match e {
            symmap::Error::DoesNotFit(m) => CliError::DoesNotFit(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "symmap", version, about = "Symmetry-based subgraph matching and circuit remapping")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a chip of a built-in family.
    GenTopology {
        #[arg(value_parser = parse_family)]
        family: Family,
        r: u32,
        c: u32,
        /// JSON file `{"vertices": [...], "edges": [[u, v], ...]}`.
        #[arg(long)]
        defects: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Radial error map centered on the chip.
    GenErrors {
        chip: PathBuf,
        #[arg(long, default_value_t = 0.001)]
        e_min: f64,
        #[arg(long, default_value_t = 0.05)]
        e_max: f64,
        /// Defaults to a quarter of the chip's bounding-box diagonal.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        readout_scale: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// All placements of a pattern graph on a chip.
    Match {
        pattern: PathBuf,
        chip: PathBuf,
        #[arg(long, value_enum, default_value_t = MatchAlgo::Sbsm)]
        algo: MatchAlgo,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Estimated fidelity of each mapping, in input order.
    Score {
        matches: PathBuf,
        circuit: PathBuf,
        errors: PathBuf,
        #[arg(long, value_enum, default_value_t = ScoreAlgo::Vec)]
        algo: ScoreAlgo,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find, score and rank every placement of a circuit.
    Remap {
        circuit: PathBuf,
        chip: PathBuf,
        errors: PathBuf,
        /// Use full-chip VF2 and per-mapping scoring instead.
        #[arg(long)]
        reference: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark suite and write CSV.
    Bench {
        suite: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Add the 88,200-qubit octagonal tier.
        #[arg(long)]
        full: bool,
        /// Run the equality checks of each cell on parallel threads.
        #[arg(long)]
        parallel_validate: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatchAlgo {
    Vf2,
    Sbsm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScoreAlgo {
    Loop,
    Vec,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: symmap::Error| e.to_string())
}

/// Reads and parses a JSON file, reporting line and column on failure.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Data(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Data(e.to_string()))?;
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| CliError::Data(e.to_string()))
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code; diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenTopology { family, r, c, defects, output } => {
            let mut chip = topology::generate(family, r, c)?;
            if let Some(path) = defects {
                let d: Defects = read_json(&path)?;
                chip = chip.with_defects(d)?;
            }
            write_json(&chip, output.as_deref())
        }
        Command::GenErrors { chip, e_min, e_max, sigma, readout_scale, output } => {
            let chip: Chip = read_json(&chip)?;
            let params = GaussianParams { e_min, e_max, sigma, center: None, readout_scale };
            write_json(&gaussian_error_map(&chip, &params)?, output.as_deref())
        }
        Command::Match { pattern, chip, algo, output } => {
            let pattern: PatternGraph = read_json(&pattern)?;
            let chip: Chip = read_json(&chip)?;
            let found = match algo {
                MatchAlgo::Vf2 => vf2_match_chip(&pattern, &chip)?,
                MatchAlgo::Sbsm => sbsm_match(&pattern, &chip)?,
            };
            write_json(&found, output.as_deref())
        }
        Command::Score { matches, circuit, errors, algo, output } => {
            let matches: MatchSet = read_json(&matches)?;
            let circuit: Circuit = read_json(&circuit)?;
            let errors: ErrorMap = read_json(&errors)?;
            let scores = match algo {
                ScoreAlgo::Loop => score_loop(&matches, &circuit, &errors)?,
                ScoreAlgo::Vec => score_vectorized(&matches, &circuit, &errors)?,
            };
            let rows: Vec<ScoredMapping> = matches
                .iter()
                .zip(scores)
                .map(|(mapping, score)| ScoredMapping { mapping, score })
                .collect();
            write_json(&rows, output.as_deref())
        }
        Command::Remap { circuit, chip, errors, reference, parallel, output } => {
            let circuit: Circuit = read_json(&circuit)?;
            let chip: Chip = read_json(&chip)?;
            let errors: ErrorMap = read_json(&errors)?;
            let result = if reference {
                mapomatic_pipeline(&circuit, &chip, &errors)?
            } else {
                sbcm_with(&circuit, &chip, &errors, RemapOptions { parallel })?
            };
            write_json(&result, output.as_deref())
        }
        Command::Bench { suite, output, svg, full, parallel_validate } => {
            let config = bench::SuiteConfig::load(&suite)?;
            let opts = bench::BenchOptions { full, parallel_validate };
            let records = bench::run_bench(&config, &opts)?;
            let csv = bench::to_csv(&records)?;
            match &output {
                Some(p) => fs::write(p, &csv).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
                None => print!("{csv}"),
            }
            if let Some(p) = svg {
                fs::write(&p, svg::render(&records)).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            }
            for s in bench::slopes(&records) {
                eprintln!("slope {} {} {}: {:.3}", s.family, s.pattern, s.algorithm, s.slope);
            }
            Ok(())
        }
    }
}
