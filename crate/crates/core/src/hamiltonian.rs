//! Diagonal cost Hamiltonians: signed products of Pauli-Z plus a constant.
//!
//! Qubit `ℓ` (1-indexed in the mathematics) is bit `ℓ − 1` of a basis-state
//! index, so a term mask is the integer encoding of the Z-support.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::scalar::Real;

/// Default ceiling on `m` for anything that touches all `2^m` basis states.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Widest register a term mask can address.
pub const MAX_MASK_QUBITS: usize = 63;

/// `coeff · Π_{ℓ ∈ mask} Z_ℓ`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTerm<T> {
    pub coeff: T,
    pub mask: u64,
}

impl<T: Real> ZTerm<T> {
    #[inline]
    pub fn value(&self, x: u64) -> T {
        if (x & self.mask).count_ones() & 1 == 0 {
            self.coeff
        } else {
            -self.coeff
        }
    }

    pub fn mask_bits(&self, m: usize) -> BitVector {
        BitVector::from_u64(self.mask, m)
    }
}

/// Weight-penalty strengths for the check-based constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PenaltyParams {
    pub alpha: u32,
    pub eta: u32,
}

impl PenaltyParams {
    pub fn new(alpha: u32, eta: u32) -> Result<Self> {
        if alpha == 0 || eta == 0 {
            return Err(Error::InvalidPenalty { alpha, eta });
        }
        Ok(Self { alpha, eta })
    }

    /// `η ≥ α`: a weight-one error matching a nonzero syndrome must beat the
    /// all-zero vector.
    pub fn satisfies_selection_rule(&self) -> bool {
        self.eta >= self.alpha
    }
}

/// `constant + Σ_t coeff_t · (−1)^{popcount(x & mask_t)}` on `m` qubits.
///
/// Terms are kept canonical: sorted by mask, identical masks merged, zero
/// coefficients dropped and the empty mask folded into the constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian<T> {
    m: usize,
    terms: Vec<ZTerm<T>>,
    constant: T,
}

/// Extremes of the spectrum found by a full scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumExtrema<T> {
    pub max: T,
    pub argmax: Vec<u64>,
    pub min: T,
}

impl<T: Real> DiagonalHamiltonian<T> {
    /// Canonicalize an arbitrary list of terms.
    pub fn new(m: usize, terms: impl IntoIterator<Item = ZTerm<T>>, constant: T) -> Result<Self> {
        if m > MAX_MASK_QUBITS {
            return Err(Error::CapExceeded {
                m,
                cap: MAX_MASK_QUBITS,
            });
        }
        let limit = (1u64 << m) - 1;
        let mut merged: BTreeMap<u64, T> = BTreeMap::new();
        let mut constant = constant;
        for t in terms {
            if t.mask & !limit != 0 {
                return Err(Error::InvalidArgument(format!("mask {:#x} exceeds {m} qubits", t.mask)));
            }
            if t.mask == 0 {
                constant = constant + t.coeff;
            } else {
                let slot = merged.entry(t.mask).or_insert_with(T::zero);
                *slot = *slot + t.coeff;
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != T::zero())
            .map(|(mask, coeff)| ZTerm { coeff, mask })
            .collect();
        Ok(Self { m, terms, constant })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[ZTerm<T>] {
        &self.terms
    }

    pub fn constant(&self) -> T {
        self.constant
    }

    /// Eigenvalue on the computational basis state `x`.
    pub fn value(&self, x: u64) -> T {
        self.terms.iter().fold(self.constant, |acc, t| acc + t.value(x))
    }

    pub fn value_of(&self, x: &BitVector) -> Result<T> {
        check_dim("basis state length", self.m, x.len())?;
        Ok(self.value(x.to_u64().expect("m ≤ 63")))
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.m > cap {
            Err(Error::CapExceeded { m: self.m, cap })
        } else {
            Ok(())
        }
    }

    /// All `2^m` eigenvalues, indexed by basis state.
    pub fn materialize(&self) -> Result<Vec<T>> {
        self.materialize_with_cap(DEFAULT_QUBIT_CAP)
    }

    pub fn materialize_with_cap(&self, cap: usize) -> Result<Vec<T>> {
        self.check_cap(cap)?;
        let dim = 1usize << self.m;
        let mut out = vec![self.constant; dim];
        const CHUNK: usize = 1 << 12;
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = (c * CHUNK) as u64;
            for t in &self.terms {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = *slot + t.value(base + i as u64);
                }
            }
        });
        Ok(out)
    }

    pub fn spectrum_extrema(&self) -> Result<SpectrumExtrema<T>> {
        self.spectrum_extrema_with_cap(DEFAULT_QUBIT_CAP)
    }

    pub fn spectrum_extrema_with_cap(&self, cap: usize) -> Result<SpectrumExtrema<T>> {
        let values = self.materialize_with_cap(cap)?;
        Ok(extrema_of(&values))
    }

    /// Text dump: a header `m=<m>\tconstant=<c>` then `coeff\tmask` lines,
    /// masks written qubit 1 first. `#` lines are comments when parsing.
    pub fn to_dump(&self) -> String {
        let mut s = format!("m={}\tconstant={}\n", self.m, self.constant);
        for t in &self.terms {
            s.push_str(&format!("{}\t{}\n", t.coeff, t.mask_bits(self.m)));
        }
        s
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut m = None;
        let mut constant = None;
        for field in header.split('\t') {
            match field.split_once('=') {
                Some(("m", v)) => m = v.trim().parse::<usize>().ok(),
                Some(("constant", v)) => constant = v.trim().parse::<f64>().ok(),
                _ => {}
            }
        }
        let (Some(m), Some(constant)) = (m, constant) else {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `m=<int>\\tconstant=<real>`".into(),
            });
        };
        let mut terms = Vec::new();
        for (idx, line) in lines {
            let bad = |msg: String| Error::Parse { line: idx + 1, msg };
            let (coeff, mask) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected `coeff<TAB>mask`".into()))?;
            let coeff: f64 = coeff.trim().parse().map_err(|_| bad(format!("bad coefficient `{coeff}`")))?;
            let mask: BitVector = mask.trim().parse().map_err(|e: Error| bad(e.to_string()))?;
            if mask.len() != m {
                return Err(bad(format!("mask has {} bits, expected {m}", mask.len())));
            }
            terms.push(ZTerm {
                coeff: T::lit(coeff),
                mask: mask.to_u64().unwrap_or(0),
            });
        }
        Self::new(m, terms, T::lit(constant))
    }

    /// Convert the coefficient type.
    pub fn cast<U: Real>(&self) -> DiagonalHamiltonian<U> {
        DiagonalHamiltonian {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|t| ZTerm {
                    coeff: U::lit(t.coeff.as_f64()),
                    mask: t.mask,
                })
                .collect(),
            constant: U::lit(self.constant.as_f64()),
        }
    }
}

pub(crate) fn extrema_of<T: Real>(values: &[T]) -> SpectrumExtrema<T> {
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let min = values.iter().copied().fold(T::infinity(), T::min);
    let tol = T::epsilon().sqrt() * max.abs().max(T::one());
    let argmax = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| max - v <= tol)
        .map(|(i, _)| i as u64)
        .collect();
    SpectrumExtrema { max, argmax, min }
}

impl<T: Real> fmt::Display for DiagonalHamiltonian<T> {
    /// Human-readable form such as `+1 Z1 Z2 -0.5 Z3 -2.5 I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.terms {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let sign = if t.coeff < T::zero() { "-" } else { "+" };
            write!(f, "{sign}{}", t.coeff.abs())?;
            for q in 0..self.m {
                if (t.mask >> q) & 1 == 1 {
                    write!(f, " Z{}", q + 1)?;
                }
            }
        }
        if self.constant != T::zero() {
            let sign = if self.constant < T::zero() { "-" } else { "+" };
            write!(f, "{}{sign}{} I", if first { "" } else { " " }, self.constant.abs())?;
        }
        Ok(())
    }
}

fn column_mask(m: &BitMatrix, col: usize) -> u64 {
    (0..m.rows()).filter(|&r| m.get(r, col)).fold(0, |acc, r| acc | (1 << r))
}

fn row_mask(m: &BitMatrix, row: usize) -> u64 {
    m.row(row).to_u64().expect("row fits in 64 bits")
}

fn sign<T: Real>(bit: bool) -> T {
    if bit {
        -T::one()
    } else {
        T::one()
    }
}

fn register_fits(m: usize) -> Result<()> {
    if m > MAX_MASK_QUBITS {
        Err(Error::CapExceeded {
            m,
            cap: MAX_MASK_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// `Σ_j (1 − 2z_j) Π_ℓ Z_ℓ^{G[ℓ, j]}` on `k` qubits.
///
/// `value(u) = n − 2·wt(uG + z)`, so the top eigenstates are the coset leaders.
pub fn classical_generator_cost<T: Real>(g: &BitMatrix, z: &BitVector) -> Result<DiagonalHamiltonian<T>> {
    check_dim("offset length vs generator columns", g.cols(), z.len())?;
    register_fits(g.rows())?;
    let terms = (0..g.cols()).map(|j| ZTerm {
        coeff: sign::<T>(z.get(j)),
        mask: column_mask(g, j),
    });
    DiagonalHamiltonian::new(g.rows(), terms, T::zero())
}

/// `η Σ_j (1 − 2s_j) Π_ℓ Z_ℓ^{H[j, ℓ]} + α Σ_ℓ Z_ℓ` on `n` qubits.
pub fn classical_check_cost<T: Real>(
    h: &BitMatrix,
    s: &BitVector,
    p: PenaltyParams,
) -> Result<DiagonalHamiltonian<T>> {
    check_dim("syndrome length vs check rows", h.rows(), s.len())?;
    register_fits(h.cols())?;
    let eta = T::lit(f64::from(p.eta));
    let alpha = T::lit(f64::from(p.alpha));
    let checks = (0..h.rows()).map(|j| ZTerm {
        coeff: eta * sign::<T>(s.get(j)),
        mask: row_mask(h, j),
    });
    let penalty = (0..h.cols()).map(|l| ZTerm {
        coeff: alpha,
        mask: 1 << l,
    });
    DiagonalHamiltonian::new(h.cols(), checks.chain(penalty), T::zero())
}

/// Generalized-weight objective on `n + k` qubits:
/// `½ Σ_j [(1−2z_j) P_j + (1−2z_{n+j}) P_{n+j} + (1−2z_j)(1−2z_{n+j}) P_j P_{n+j} − I]`
/// where `P_c` is the Z-product over column `c` of `G_S`.
///
/// `value(u) = n − 2·gw(uG_S + z)`.
pub fn quantum_generator_cost<T: Real>(g_s: &BitMatrix, z: &BitVector) -> Result<DiagonalHamiltonian<T>> {
    check_dim("offset length vs generator columns", g_s.cols(), z.len())?;
    if !g_s.cols().is_multiple_of(2) {
        return Err(Error::OddLength(g_s.cols()));
    }
    register_fits(g_s.rows())?;
    let n = g_s.cols() / 2;
    let half = T::lit(0.5);
    let mut terms = Vec::with_capacity(3 * n);
    for j in 0..n {
        let (sx, sz) = (sign::<T>(z.get(j)), sign::<T>(z.get(n + j)));
        let (mx, mz) = (column_mask(g_s, j), column_mask(g_s, n + j));
        terms.push(ZTerm { coeff: half * sx, mask: mx });
        terms.push(ZTerm { coeff: half * sz, mask: mz });
        terms.push(ZTerm {
            coeff: half * sx * sz,
            mask: mx ^ mz,
        });
    }
    let constant = -half * T::lit(n as f64);
    DiagonalHamiltonian::new(g_s.rows(), terms, constant)
}

/// `η Σ_j (1 − 2s_j) Π_ℓ Z_ℓ^{[H_SΛ]_{j,ℓ}} + (α/2) Σ_j (Z_j + Z_{n+j} + Z_j Z_{n+j} − I)` on `2n` qubits.
pub fn quantum_check_cost<T: Real>(
    h_s: &BitMatrix,
    s: &BitVector,
    p: PenaltyParams,
) -> Result<DiagonalHamiltonian<T>> {
    check_dim("syndrome length vs check rows", h_s.rows(), s.len())?;
    let twisted = h_s.swap_halves()?;
    register_fits(h_s.cols())?;
    let n = h_s.cols() / 2;
    let eta = T::lit(f64::from(p.eta));
    let half_alpha = T::lit(f64::from(p.alpha) / 2.0);
    let mut terms: Vec<ZTerm<T>> = (0..h_s.rows())
        .map(|j| ZTerm {
            coeff: eta * sign::<T>(s.get(j)),
            mask: row_mask(&twisted, j),
        })
        .collect();
    for j in 0..n {
        terms.push(ZTerm { coeff: half_alpha, mask: 1 << j });
        terms.push(ZTerm {
            coeff: half_alpha,
            mask: 1 << (n + j),
        });
        terms.push(ZTerm {
            coeff: half_alpha,
            mask: (1 << j) | (1 << (n + j)),
        });
    }
    let constant = -half_alpha * T::lit(n as f64);
    DiagonalHamiltonian::new(2 * n, terms, constant)
}
