//! A code paired with one of the four cost-Hamiltonian constructions.
//!
//! This is the single place where a syndrome is turned into a coset offset
//! `z`, a Hamiltonian and a map from measured basis states back to error
//! candidates, so the optimizer, the decoders and the distribution analysis
//! all agree on the labeling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::Code;
use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;
use crate::hamiltonian::{
    classical_check_cost, classical_generator_cost, quantum_check_cost, quantum_generator_cost,
    DiagonalHamiltonian, PenaltyParams,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    #[serde(rename = "gen")]
    Generator,
    Check,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Generator => "gen",
            ConstructionKind::Check => "check",
        })
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gen" | "generator" => Ok(Self::Generator),
            "check" => Ok(Self::Check),
            other => Err(Error::InvalidArgument(format!("unknown construction `{other}` (gen|check)"))),
        }
    }
}

/// Generator-based, or check-based with its penalty weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Generator,
    Check(PenaltyParams),
}

impl Construction {
    pub fn kind(&self) -> ConstructionKind {
        match self {
            Construction::Generator => ConstructionKind::Generator,
            Construction::Check(_) => ConstructionKind::Check,
        }
    }

    pub fn penalty(&self) -> Option<PenaltyParams> {
        match self {
            Construction::Generator => None,
            Construction::Check(p) => Some(*p),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecodingProblem {
    pub code: Code,
    pub construction: Construction,
}

/// Hamiltonian for one syndrome, together with the offset used to build it.
#[derive(Debug, Clone)]
pub struct SyndromeInstance<T> {
    pub syndrome: BitVector,
    /// Coset offset `z` (zero for check-based constructions).
    pub offset: BitVector,
    pub hamiltonian: DiagonalHamiltonian<T>,
}

impl DecodingProblem {
    pub fn new(code: Code, construction: Construction) -> Self {
        Self { code, construction }
    }

    /// Register size: `k`, `n`, `n + k` or `2n` depending on code and construction.
    pub fn qubits(&self) -> usize {
        match (&self.code, self.construction) {
            (Code::Classical(c), Construction::Generator) => c.k,
            (Code::Classical(c), Construction::Check(_)) => c.n,
            (Code::Quantum(c), Construction::Generator) => c.n + c.k,
            (Code::Quantum(c), Construction::Check(_)) => 2 * c.n,
        }
    }

    /// Build the instance for syndrome `s`, using the deterministic coset
    /// representative as offset.
    pub fn instance<T: Real>(&self, s: &BitVector) -> Result<SyndromeInstance<T>> {
        check_dim("syndrome length", self.code.r(), s.len())?;
        match self.construction {
            Construction::Generator => {
                let z = self.code.coset_representative(s)?;
                self.instance_with_offset(&z)
            }
            Construction::Check(p) => {
                // fail early on unreachable syndromes, like the generator path
                self.code.coset_representative(s)?;
                let hamiltonian = match &self.code {
                    Code::Classical(c) => classical_check_cost(&c.h, s, p)?,
                    Code::Quantum(c) => quantum_check_cost(&c.h_s, s, p)?,
                };
                Ok(SyndromeInstance {
                    syndrome: s.clone(),
                    offset: BitVector::zeros(self.code.error_len()),
                    hamiltonian,
                })
            }
        }
    }

    /// Generator-based instance for an explicit offset `z`; the syndrome is
    /// that of `z`. Check-based constructions ignore the offset value.
    pub fn instance_with_offset<T: Real>(&self, z: &BitVector) -> Result<SyndromeInstance<T>> {
        check_dim("offset length", self.code.error_len(), z.len())?;
        let s = self.code.syndrome(z)?;
        match self.construction {
            Construction::Generator => {
                let hamiltonian = match &self.code {
                    Code::Classical(c) => classical_generator_cost(&c.g, z)?,
                    Code::Quantum(c) => quantum_generator_cost(&c.g_s, z)?,
                };
                Ok(SyndromeInstance {
                    syndrome: s,
                    offset: z.clone(),
                    hamiltonian,
                })
            }
            Construction::Check(_) => self.instance(&s),
        }
    }

    /// Error candidate for a measured basis state `x`.
    pub fn candidate(&self, x: u64, offset: &BitVector) -> BitVector {
        let m = self.qubits();
        let bits = BitVector::from_u64(x, m);
        match (&self.code, self.construction) {
            (Code::Classical(c), Construction::Generator) => &c.g.left_mul(&bits).expect("k bits") ^ offset,
            (Code::Quantum(c), Construction::Generator) => &c.g_s.left_mul(&bits).expect("n+k bits") ^ offset,
            (_, Construction::Check(_)) => bits,
        }
    }

    /// Hamming or generalized weight, as appropriate for the code.
    pub fn error_weight(&self, e: &BitVector) -> usize {
        self.code.error_weight(e)
    }
}
