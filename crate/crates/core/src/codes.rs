//! Classical linear codes, stabilizer codes in their binary symplectic image,
//! and the syndrome / coset / weight operations the decoders rely on.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// `e · Hᵀ` over GF(2).
pub fn syndrome_classical(e: &BitVector, h: &BitMatrix) -> Result<BitVector> {
    h.mul_transpose(e)
}

/// `e · Λ · H_Sᵀ`, the commutation pattern of a Pauli error with the checks.
pub fn syndrome_symplectic(e: &BitVector, h_s: &BitMatrix) -> Result<BitVector> {
    check_dim("error length vs check matrix columns", h_s.cols(), e.len())?;
    h_s.mul_transpose(&e.swap_halves()?)
}

/// Symplectic inner product `a · Λ · bᵀ`; `true` when the Paulis anticommute.
pub fn symplectic_product(a: &BitVector, b: &BitVector) -> Result<bool> {
    check_dim("symplectic product", a.len(), b.len())?;
    a.swap_halves()?.dot(b)
}

/// A fixed vector with the requested syndrome.
///
/// Deterministic: leftmost-pivot Gaussian elimination with every free
/// coordinate set to zero. With `symplectic` the syndrome map is `z ↦ zΛHᵀ`.
pub fn coset_representative(h: &BitMatrix, s: &BitVector, symplectic: bool) -> Result<BitVector> {
    check_dim("syndrome length vs check rows", h.rows(), s.len())?;
    let map = if symplectic { h.swap_halves()? } else { h.clone() };
    map.solve(s)
        .ok_or_else(|| Error::InconsistentSyndrome(s.to_string()))
}

/// Basis of the null space of `v ↦ v·Hᵀ`, i.e. a generator matrix for the code
/// with parity checks `H`.
pub fn generator_from_checks(h: &BitMatrix) -> BitMatrix {
    h.nullspace()
}

/// Index pair of the first two anticommuting rows, if any.
fn first_anticommuting_pair(h_s: &BitMatrix) -> Result<Option<(usize, usize)>> {
    let twisted = h_s.swap_halves()?;
    for i in 0..h_s.rows() {
        for j in i + 1..h_s.rows() {
            if twisted.row(i).dot(&h_s.row(j))? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Basis of the normalizer image `{v : vΛH_Sᵀ = 0}`.
///
/// The independent check rows come first, in input order; the basis is then
/// completed with null-space vectors that raise the rank.
pub fn normalizer_basis(h_s: &BitMatrix) -> Result<BitMatrix> {
    if let Some((i, j)) = first_anticommuting_pair(h_s)? {
        return Err(Error::NotSelfOrthogonal(i + 1, j + 1));
    }
    let null = h_s.swap_halves()?.nullspace();
    let mut chosen: Vec<BitVector> = Vec::with_capacity(null.rows());
    let mut span = BitMatrix::zeros(0, h_s.cols());
    for candidate in h_s.row_iter().chain(null.row_iter()) {
        if !span.in_rowspace(&candidate)? {
            chosen.push(candidate);
            span = BitMatrix::from_vectors(h_s.cols(), &chosen)?;
        }
        if chosen.len() == null.rows() {
            break;
        }
    }
    Ok(span)
}

pub fn hamming_weight(v: &BitVector) -> usize {
    v.weight()
}

/// Number of qubit positions `j` with `v_j = 1` or `v_{n+j} = 1`.
pub fn generalized_weight(v: &BitVector) -> Result<usize> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::OddLength(v.len()));
    }
    let n = v.len() / 2;
    Ok((0..n).filter(|&j| v.get(j) || v.get(n + j)).count())
}

pub fn in_rowspace(v: &BitVector, m: &BitMatrix) -> Result<bool> {
    m.in_rowspace(v)
}

/// Symplectic image of a Pauli string such as `XZZXI` (`I`, `X`, `Y`, `Z`).
pub fn pauli_to_symplectic(pauli: &str) -> Result<BitVector> {
    let letters: Vec<char> = pauli.chars().filter(|c| !c.is_whitespace()).collect();
    let n = letters.len();
    let mut v = BitVector::zeros(2 * n);
    for (j, c) in letters.into_iter().enumerate() {
        let (x, z) = match c.to_ascii_uppercase() {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            other => return Err(Error::InvalidArgument(format!("`{other}` is not a Pauli letter"))),
        };
        v.set(j, x);
        v.set(n + j, z);
    }
    Ok(v)
}

/// Single-qubit Pauli written as e.g. `X1` or `Z2` (1-indexed), on `n` qubits.
pub fn single_qubit_pauli(spec: &str, n: usize) -> Result<BitVector> {
    let spec = spec.trim();
    let mut chars = spec.chars();
    let letter = chars.next().ok_or_else(|| Error::InvalidArgument("empty Pauli".into()))?;
    let qubit: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("`{spec}` is not of the form X1, Y3, Z2")))?;
    if qubit == 0 || qubit > n {
        return Err(Error::InvalidArgument(format!("qubit {qubit} outside 1..={n}")));
    }
    let mut letters = vec!['I'; n];
    letters[qubit - 1] = letter;
    pauli_to_symplectic(&letters.into_iter().collect::<String>())
}

/// Symplectic vector rendered as a Pauli string.
pub fn symplectic_to_pauli(v: &BitVector) -> Result<String> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::OddLength(v.len()));
    }
    let n = v.len() / 2;
    Ok((0..n)
        .map(|j| match (v.get(j), v.get(n + j)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        })
        .collect())
}

/// An `[n, k]` binary linear code given by parity checks and a generator matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub h: BitMatrix,
    pub g: BitMatrix,
}

impl LinearCode {
    /// Validates `G·Hᵀ = 0`, `rank H = n − k` and `rank G = k`; derives `G` if absent.
    pub fn new(name: impl Into<String>, h: BitMatrix, g: Option<BitMatrix>) -> Result<Self> {
        let n = h.cols();
        let k = n - h.rank();
        let g = g.unwrap_or_else(|| generator_from_checks(&h));
        check_dim("generator columns", n, g.cols())?;
        if g.rank() != k || g.rows() != k {
            return Err(Error::InvalidCode(format!(
                "generator has {} rows of rank {}, expected {k}",
                g.rows(),
                g.rank()
            )));
        }
        if !g.mul(&h.transpose())?.is_zero() {
            return Err(Error::InvalidCode("G·Hᵀ ≠ 0".into()));
        }
        Ok(Self {
            name: name.into(),
            n,
            k,
            h,
            g,
        })
    }

    pub fn syndrome(&self, e: &BitVector) -> Result<BitVector> {
        syndrome_classical(e, &self.h)
    }

    pub fn coset_representative(&self, s: &BitVector) -> Result<BitVector> {
        coset_representative(&self.h, s, false)
    }

    /// Number of check rows.
    pub fn r(&self) -> usize {
        self.h.rows()
    }
}

/// An `[[n, k]]` stabilizer code in its binary symplectic image.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    /// Check matrix, `r × 2n`.
    pub h_s: BitMatrix,
    /// Normalizer generator matrix, `(n + k) × 2n`.
    pub g_s: BitMatrix,
    /// Rows generating the stabilizer image (used for degeneracy).
    pub stab_rows: BitMatrix,
}

impl StabilizerCode {
    pub fn new(name: impl Into<String>, h_s: BitMatrix, g_s: Option<BitMatrix>) -> Result<Self> {
        if !h_s.cols().is_multiple_of(2) {
            return Err(Error::OddLength(h_s.cols()));
        }
        if let Some((i, j)) = first_anticommuting_pair(&h_s)? {
            return Err(Error::NotSelfOrthogonal(i + 1, j + 1));
        }
        let n = h_s.cols() / 2;
        let k = n - h_s.rank();
        let g_s = match g_s {
            Some(g) => g,
            None => normalizer_basis(&h_s)?,
        };
        check_dim("normalizer generator columns", 2 * n, g_s.cols())?;
        if g_s.rows() != n + k || g_s.rank() != n + k {
            return Err(Error::InvalidCode(format!(
                "normalizer generator has {} rows of rank {}, expected {}",
                g_s.rows(),
                g_s.rank(),
                n + k
            )));
        }
        if !g_s.mul(&h_s.swap_halves()?.transpose())?.is_zero() {
            return Err(Error::InvalidCode("G_S·Λ·H_Sᵀ ≠ 0".into()));
        }
        Ok(Self {
            name: name.into(),
            n,
            k,
            stab_rows: h_s.clone(),
            h_s,
            g_s,
        })
    }

    pub fn syndrome(&self, e: &BitVector) -> Result<BitVector> {
        syndrome_symplectic(e, &self.h_s)
    }

    pub fn coset_representative(&self, s: &BitVector) -> Result<BitVector> {
        coset_representative(&self.h_s, s, true)
    }

    pub fn r(&self) -> usize {
        self.h_s.rows()
    }

    /// Whether `a + b` lies in the stabilizer image.
    pub fn degenerate(&self, a: &BitVector, b: &BitVector) -> Result<bool> {
        self.stab_rows.in_rowspace(&a.try_xor(b)?)
    }
}

/// Either kind of code.
#[derive(Debug, Clone, PartialEq)]
pub enum Code {
    Classical(LinearCode),
    Quantum(StabilizerCode),
}

impl Code {
    pub fn name(&self) -> &str {
        match self {
            Code::Classical(c) => &c.name,
            Code::Quantum(c) => &c.name,
        }
    }

    /// Number of checks, i.e. syndrome length.
    pub fn r(&self) -> usize {
        match self {
            Code::Classical(c) => c.r(),
            Code::Quantum(c) => c.r(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Code::Classical(c) => c.n,
            Code::Quantum(c) => c.n,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Code::Classical(c) => c.k,
            Code::Quantum(c) => c.k,
        }
    }

    /// Length of an error vector (`n`, or `2n` for stabilizer codes).
    pub fn error_len(&self) -> usize {
        match self {
            Code::Classical(c) => c.n,
            Code::Quantum(c) => 2 * c.n,
        }
    }

    pub fn syndrome(&self, e: &BitVector) -> Result<BitVector> {
        match self {
            Code::Classical(c) => c.syndrome(e),
            Code::Quantum(c) => c.syndrome(e),
        }
    }

    pub fn coset_representative(&self, s: &BitVector) -> Result<BitVector> {
        match self {
            Code::Classical(c) => c.coset_representative(s),
            Code::Quantum(c) => c.coset_representative(s),
        }
    }

    /// Hamming weight for classical codes, generalized weight for stabilizer codes.
    pub fn error_weight(&self, e: &BitVector) -> usize {
        match self {
            Code::Classical(_) => e.weight(),
            Code::Quantum(_) => generalized_weight(e).expect("stabilizer errors have even length"),
        }
    }

    /// All distinct achievable syndromes, in increasing integer order.
    pub fn reachable_syndromes(&self) -> Vec<BitVector> {
        let r = self.r();
        assert!(r < 32, "syndrome enumeration limited to r < 32");
        (0..1u64 << r)
            .map(|s| BitVector::from_u64(s, r))
            .filter(|s| self.coset_representative(s).is_ok())
            .collect()
    }

    pub fn as_classical(&self) -> Option<&LinearCode> {
        match self {
            Code::Classical(c) => Some(c),
            Code::Quantum(_) => None,
        }
    }

    pub fn as_quantum(&self) -> Option<&StabilizerCode> {
        match self {
            Code::Quantum(c) => Some(c),
            Code::Classical(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Classical,
    Quantum,
}

/// On-disk code definition (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDefinition {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: CodeKind,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "rows_H")]
    pub rows_h: Vec<Vec<u8>>,
    #[serde(rename = "rows_G", default, skip_serializing_if = "Option::is_none")]
    pub rows_g: Option<Vec<Vec<u8>>>,
    #[serde(rename = "rows_GS", default, skip_serializing_if = "Option::is_none")]
    pub rows_gs: Option<Vec<Vec<u8>>>,
}

impl CodeDefinition {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("definition serializes")
    }

    /// Validate and build the code.
    pub fn build(&self) -> Result<Code> {
        let width = match self.kind {
            CodeKind::Classical => self.n,
            CodeKind::Quantum => 2 * self.n,
        };
        let h = BitMatrix::from_rows(&self.rows_h, Some(width))?;
        check_dim("rows_H width", width, h.cols())?;
        let code = match self.kind {
            CodeKind::Classical => {
                if self.rows_gs.is_some() {
                    return Err(Error::InvalidCode("rows_GS given for a classical code".into()));
                }
                let g = self
                    .rows_g
                    .as_ref()
                    .map(|rows| BitMatrix::from_rows(rows, Some(width)))
                    .transpose()?;
                Code::Classical(LinearCode::new(&self.name, h, g)?)
            }
            CodeKind::Quantum => {
                if self.rows_g.is_some() {
                    return Err(Error::InvalidCode("rows_G given for a quantum code; use rows_GS".into()));
                }
                let g = self
                    .rows_gs
                    .as_ref()
                    .map(|rows| BitMatrix::from_rows(rows, Some(width)))
                    .transpose()?;
                Code::Quantum(StabilizerCode::new(&self.name, h, g)?)
            }
        };
        if code.k() != self.k {
            return Err(Error::InvalidCode(format!(
                "declared k = {} but the checks give k = {}",
                self.k,
                code.k()
            )));
        }
        Ok(code)
    }
}

impl Code {
    pub fn definition(&self) -> CodeDefinition {
        let rows = |m: &BitMatrix| m.row_iter().map(|r| r.to_bits()).collect::<Vec<_>>();
        match self {
            Code::Classical(c) => CodeDefinition {
                name: c.name.clone(),
                kind: CodeKind::Classical,
                n: c.n,
                k: c.k,
                rows_h: rows(&c.h),
                rows_g: Some(rows(&c.g)),
                rows_gs: None,
            },
            Code::Quantum(c) => CodeDefinition {
                name: c.name.clone(),
                kind: CodeKind::Quantum,
                n: c.n,
                k: c.k,
                rows_h: rows(&c.h_s),
                rows_g: None,
                rows_gs: Some(rows(&c.g_s)),
            },
        }
    }
}
