use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qaoa_decode::codes::{pauli_to_symplectic, single_qubit_pauli};
use qaoa_decode::optimizer::Strategy;
use qaoa_decode::problem::ConstructionKind;
use qaoa_decode::{catalog, BitVector, Code, CodeDefinition, Construction, DecodingProblem, PenaltyParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    Multistart,
    BasinHopping,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderName {
    Qaoa,
    CosetLeader,
}

/// Every knob a command can read. Values come from `--config` first, then
/// command-line flags override field by field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog id, or path to a JSON code definition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<u32>,
    /// Shots per decoding call.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hops: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub syndrome: Option<String>,
    /// Coset offset or channel error: bits, a Pauli string, or e.g. `Z2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_syndromes: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoder: Option<DecoderName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_failures: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub archive: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: RunConfig) -> Self {
        overlay!(
            self, top, code, construction, p, alpha, eta, shots, epsilons, seed, strategy, budget, hops, step,
            syndrome, offset, all_syndromes, gammas, betas, decoder, max_failures, max_trials, top, graph,
            archive, out, summary
        )
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn p(&self) -> Result<usize> {
        match self.p.unwrap_or(1) {
            0 => bail!("p must be at least 1"),
            p => Ok(p),
        }
    }

    pub fn code(&self) -> Result<Code> {
        let id = self.code.as_deref().context("no code given (--code)")?;
        load_code(id)
    }

    pub fn construction(&self) -> Result<Construction> {
        match self.construction.unwrap_or(ConstructionKind::Generator) {
            ConstructionKind::Generator => Ok(Construction::Generator),
            ConstructionKind::Check => {
                let (Some(alpha), Some(eta)) = (self.alpha, self.eta) else {
                    bail!("check construction needs --alpha and --eta");
                };
                Ok(Construction::Check(PenaltyParams::new(alpha, eta)?))
            }
        }
    }

    pub fn problem(&self) -> Result<DecodingProblem> {
        Ok(DecodingProblem::new(self.code()?, self.construction()?))
    }

    pub fn strategy(&self) -> Result<Strategy> {
        let Strategy::Best { budget, hops, step } = Strategy::default() else {
            unreachable!("default strategy runs both searches")
        };
        let budget = self.budget.unwrap_or(budget);
        let hops = self.hops.unwrap_or(hops);
        let step = self.step.unwrap_or(step);
        if budget == 0 {
            bail!("budget must be positive");
        }
        if !(step.is_finite() && step > 0.0) {
            bail!("step must be a positive number");
        }
        Ok(match self.strategy.unwrap_or(StrategyName::Best) {
            StrategyName::Multistart => Strategy::Multistart { budget },
            StrategyName::BasinHopping => Strategy::BasinHopping { hops, step },
            StrategyName::Best => Strategy::Best { budget, hops, step },
        })
    }

    /// The offset (or error) vector, if one was given.
    pub fn offset_for(&self, code: &Code) -> Result<Option<BitVector>> {
        self.offset.as_deref().map(|s| parse_error_vector(s, code)).transpose()
    }

    pub fn syndrome_for(&self, code: &Code) -> Result<Option<BitVector>> {
        let Some(text) = self.syndrome.as_deref() else {
            return Ok(None);
        };
        let s: BitVector = text.parse().with_context(|| format!("bad syndrome `{text}`"))?;
        if s.len() != code.r() {
            bail!("syndrome `{text}` has {} bits, the code has {} checks", s.len(), code.r());
        }
        Ok(Some(s))
    }
}

pub fn load_code(id: &str) -> Result<Code> {
    if catalog::list().any(|(name, _)| name == id) {
        return Ok(catalog::load(id)?);
    }
    let path = Path::new(id);
    if !path.exists() {
        bail!("`{id}` is neither a catalog code nor a file (see `codes list`)");
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let def = CodeDefinition::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(def.build()?)
}

/// Accepts a bit string (`0000010`, `10000|00000`), a Pauli string
/// (`XIIII`) or a single-qubit Pauli (`Z2`) for stabilizer codes.
pub fn parse_error_vector(text: &str, code: &Code) -> Result<BitVector> {
    let v = if text.chars().all(|c| matches!(c, '0' | '1' | '|')) {
        text.parse::<BitVector>()?
    } else {
        let Code::Quantum(q) = code else {
            bail!("`{text}` is not a bit string");
        };
        if text.chars().skip(1).all(|c| c.is_ascii_digit()) {
            single_qubit_pauli(text, q.n)?
        } else {
            pauli_to_symplectic(text)?
        }
    };
    if v.len() != code.error_len() {
        bail!("`{text}` has {} bits, expected {}", v.len(), code.error_len());
    }
    Ok(v)
}
