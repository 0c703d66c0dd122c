//! Optimized angles per `(code, construction, penalty, p, syndrome)`, stored
//! as JSON lines so Monte-Carlo runs never re-optimize.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::AngleSchedule;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::optimizer::{optimize, Objective, Strategy};
use crate::problem::{ConstructionKind, DecodingProblem};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleRecord {
    pub code: String,
    pub construction: ConstructionKind,
    /// Syndrome bitstring, first check first.
    pub syndrome: String,
    pub p: usize,
    pub alpha: Option<u32>,
    pub eta: Option<u32>,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    #[serde(rename = "F_p")]
    pub f_p: f64,
    pub strategy: String,
    pub seed: u64,
}

type Key = (String, ConstructionKind, Option<u32>, Option<u32>, usize, String);

impl AngleRecord {
    fn key(&self) -> Key {
        (
            self.code.clone(),
            self.construction,
            self.alpha,
            self.eta,
            self.p,
            self.syndrome.clone(),
        )
    }

    pub fn schedule(&self) -> Result<AngleSchedule<f64>> {
        AngleSchedule::new(self.gammas.clone(), self.betas.clone())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AngleArchive {
    records: Vec<AngleRecord>,
}

impl AngleArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[AngleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Insert or replace the record with the same key; records stay sorted by key.
    pub fn insert(&mut self, record: AngleRecord) {
        let key = record.key();
        match self.records.binary_search_by(|r| r.key().cmp(&key)) {
            Ok(i) => self.records[i] = record,
            Err(i) => self.records.insert(i, record),
        }
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = AngleRecord>) {
        for r in records {
            self.insert(r);
        }
    }

    pub fn lookup(&self, problem: &DecodingProblem, p: usize, syndrome: &BitVector) -> Option<&AngleRecord> {
        let penalty = problem.construction.penalty();
        let key: Key = (
            problem.code.name().to_string(),
            problem.construction.kind(),
            penalty.map(|q| q.alpha),
            penalty.map(|q| q.eta),
            p,
            syndrome.to_string(),
        );
        self.records
            .binary_search_by(|r| r.key().cmp(&key))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn to_writer<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn from_reader<R: BufRead>(input: R) -> Result<Self> {
        let mut archive = Self::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let record: AngleRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            archive.insert(record);
        }
        Ok(archive)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot open {}: {e}", path.display())))?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()));
        let file = std::fs::File::create(path).map_err(io)?;
        let mut out = std::io::BufWriter::new(file);
        self.to_writer(&mut out).map_err(io)?;
        out.flush().map_err(io)
    }
}

/// Optimized record for one syndrome, with the normalized value `F_p / max`.
#[derive(Debug, Clone)]
pub struct OptimizedSyndrome {
    pub record: AngleRecord,
    pub spectrum_max: f64,
    pub spectrum_min: f64,
}

impl OptimizedSyndrome {
    pub fn normalized(&self) -> f64 {
        self.record.f_p / self.spectrum_max
    }
}

/// Optimize angles for one syndrome. The seed for the search is derived
/// from `seed` and the syndrome's integer value.
pub fn optimize_syndrome(
    problem: &DecodingProblem,
    s: &BitVector,
    p: usize,
    strategy: Strategy,
    seed: u64,
) -> Result<OptimizedSyndrome> {
    let inst = problem.instance::<f64>(s)?;
    let diagonal = inst.hamiltonian.materialize()?;
    let ext = crate::hamiltonian::extrema_of(&diagonal);
    let obj = Objective::from_diagonal(diagonal, p)?;
    let sub_seed = derive_seed(seed, &[s.to_u64().unwrap_or(0)]);
    let report = optimize(&obj, strategy, sub_seed)?;
    debug_assert!(report.best_value <= ext.max + 1e-9 * ext.max.abs().max(1.0));
    let penalty = problem.construction.penalty();
    Ok(OptimizedSyndrome {
        record: AngleRecord {
            code: problem.code.name().to_string(),
            construction: problem.construction.kind(),
            syndrome: s.to_string(),
            p,
            alpha: penalty.map(|q| q.alpha),
            eta: penalty.map(|q| q.eta),
            gammas: report.best.gammas().to_vec(),
            betas: report.best.betas().to_vec(),
            f_p: report.best_value,
            strategy: report.strategy,
            seed,
        },
        spectrum_max: ext.max,
        spectrum_min: ext.min,
    })
}

/// [`optimize_syndrome`] for every reachable syndrome, in increasing integer order.
pub fn optimize_all_syndromes(
    problem: &DecodingProblem,
    p: usize,
    strategy: Strategy,
    seed: u64,
) -> Result<Vec<OptimizedSyndrome>> {
    problem
        .code
        .reachable_syndromes()
        .par_iter()
        .map(|s| optimize_syndrome(problem, s, p, strategy, seed))
        .collect()
}
