//! Exact statevector simulation of the level-p QAOA circuit.

use std::io::{Read, Write};

use num_complex::Complex;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;
use crate::hamiltonian::DEFAULT_QUBIT_CAP;
use crate::scalar::Real;

// below this size rayon overhead dominates
const PAR_THRESHOLD: usize = 1 << 14;

/// Level-p angles `(γ_1..γ_p, β_1..β_p)`, each reduced into `[0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct AngleSchedule<T> {
    gammas: Vec<T>,
    betas: Vec<T>,
}

impl<T: Real> AngleSchedule<T> {
    pub fn new(gammas: Vec<T>, betas: Vec<T>) -> Result<Self> {
        check_dim("gamma and beta counts", gammas.len(), betas.len())?;
        if gammas.is_empty() {
            return Err(Error::InvalidArgument("schedule needs p ≥ 1".into()));
        }
        if gammas.iter().chain(&betas).any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(Self {
            gammas: gammas.into_iter().map(Real::wrap_pi).collect(),
            betas: betas.into_iter().map(Real::wrap_pi).collect(),
        })
    }

    /// Every layer set to the same `(γ, β)`.
    pub fn uniform(p: usize, gamma: T, beta: T) -> Result<Self> {
        Self::new(vec![gamma; p], vec![beta; p])
    }

    /// From the flat layout `[γ_1..γ_p, β_1..β_p]`.
    pub fn from_flat(flat: &[T]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::OddLength(flat.len()));
        }
        let p = flat.len() / 2;
        Self::new(flat[..p].to_vec(), flat[p..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<T> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }
}

/// `2^m` complex amplitudes; basis index bit `j` is qubit `j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    m: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|+⟩^{⊗m}`.
    pub fn plus_state(m: usize) -> Result<Self> {
        Self::plus_state_with_cap(m, DEFAULT_QUBIT_CAP)
    }

    pub fn plus_state_with_cap(m: usize, cap: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("register needs at least one qubit".into()));
        }
        if m > cap {
            return Err(Error::CapExceeded { m, cap });
        }
        let dim = 1usize << m;
        let a = T::one() / T::lit(dim as f64).sqrt();
        Ok(Self {
            m,
            amps: vec![Complex::new(a, T::zero()); dim],
        })
    }

    /// Computational basis state `|x⟩`.
    pub fn basis(m: usize, x: u64) -> Result<Self> {
        if m > DEFAULT_QUBIT_CAP {
            return Err(Error::CapExceeded {
                m,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let dim = 1usize << m;
        if x as usize >= dim {
            return Err(Error::InvalidArgument(format!("basis index {x} outside {m} qubits")));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[x as usize] = Complex::new(T::one(), T::zero());
        Ok(Self { m, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let m = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << m || m == 0 {
            return Err(Error::InvalidArgument(format!("{} amplitudes is not 2^m, m ≥ 1", amps.len())));
        }
        Ok(Self { m, amps })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Measurement distribution `|ψ_x|²`.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `e^{−iγĈ}` for a materialized diagonal `d`.
    pub fn apply_cost_layer(&mut self, diagonal: &[T], gamma: T) -> Result<()> {
        check_dim("diagonal length vs state", self.amps.len(), diagonal.len())?;
        let kernel = |(a, &d): (&mut Complex<T>, &T)| {
            let (s, c) = (gamma * d).sin_cos();
            *a = *a * Complex::new(c, -s);
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().zip(diagonal.par_iter()).for_each(kernel);
        } else {
            self.amps.iter_mut().zip(diagonal.iter()).for_each(kernel);
        }
        Ok(())
    }

    /// `Π_j e^{−iβX_j}`, one qubit at a time over stride-`2^j` pairs.
    pub fn apply_mixer_layer(&mut self, beta: T) {
        let (s, c) = beta.sin_cos();
        let minus_i_s = Complex::new(T::zero(), -s);
        let cos = Complex::new(c, T::zero());
        for j in 0..self.m {
            let stride = 1usize << j;
            let rotate = |block: &mut [Complex<T>]| {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = cos * x0 + minus_i_s * x1;
                    *a1 = minus_i_s * x0 + cos * x1;
                }
            };
            if self.amps.len() >= PAR_THRESHOLD {
                self.amps.par_chunks_mut(2 * stride).for_each(rotate);
            } else {
                self.amps.chunks_mut(2 * stride).for_each(rotate);
            }
        }
    }

    /// `⟨ψ|Ĉ|ψ⟩`.
    pub fn expectation(&self, diagonal: &[T]) -> Result<T> {
        check_dim("diagonal length vs state", self.amps.len(), diagonal.len())?;
        Ok(self.amps.iter().zip(diagonal).map(|(a, &d)| a.norm_sqr() * d).sum())
    }

    /// `T` seeded draws in the computational basis, as basis indices.
    pub fn sample_indices(&self, shots: usize, seed: u64) -> Result<Vec<u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Sampler::new(&self.probabilities())?.draw(shots, &mut rng)
    }

    /// `T` seeded draws in the computational basis.
    pub fn sample(&self, shots: usize, seed: u64) -> Result<Vec<BitVector>> {
        Ok(self
            .sample_indices(shots, seed)?
            .into_iter()
            .map(|x| BitVector::from_u64(x, self.m))
            .collect())
    }

    /// Little-endian dump: `u32` m, then `(re, im)` pairs as `f64`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(&(self.m as u32).to_le_bytes())?;
        for a in &self.amps {
            out.write_all(&a.re.as_f64().to_le_bytes())?;
            out.write_all(&a.im.as_f64().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump<R: Read>(mut input: R) -> Result<Self> {
        let io = |e: std::io::Error| Error::InvalidArgument(format!("state dump: {e}"));
        let mut word = [0u8; 4];
        input.read_exact(&mut word).map_err(io)?;
        let m = u32::from_le_bytes(word) as usize;
        if m == 0 || m > DEFAULT_QUBIT_CAP {
            return Err(Error::CapExceeded {
                m,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let mut amps = Vec::with_capacity(1 << m);
        let mut buf = [0u8; 16];
        for _ in 0..1usize << m {
            input.read_exact(&mut buf).map_err(io)?;
            let re = f64::from_le_bytes(buf[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(buf[8..].try_into().expect("8 bytes"));
            amps.push(Complex::new(T::lit(re), T::lit(im)));
        }
        Ok(Self { m, amps })
    }
}

/// Seeded categorical sampler over basis states.
#[derive(Debug, Clone)]
pub struct Sampler {
    dist: WeightedIndex<f64>,
}

impl Sampler {
    pub fn new<T: Real>(probabilities: &[T]) -> Result<Self> {
        let weights: Vec<f64> = probabilities.iter().map(|p| p.as_f64().max(0.0)).collect();
        let dist = WeightedIndex::new(weights)
            .map_err(|e| Error::InvalidArgument(format!("cannot sample from distribution: {e}")))?;
        Ok(Self { dist })
    }

    pub fn draw<R: rand::Rng>(&self, shots: usize, rng: &mut R) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("need at least one shot".into()));
        }
        Ok((0..shots).map(|_| self.dist.sample(rng) as u64).collect())
    }
}

/// `U(B̂,β_p)U(Ĉ,γ_p)···U(B̂,β_1)U(Ĉ,γ_1)|+⟩^{⊗m}`.
pub fn run_circuit<T: Real>(diagonal: &[T], schedule: &AngleSchedule<T>) -> Result<StateVector<T>> {
    let m = diagonal.len().trailing_zeros() as usize;
    if diagonal.len() != 1 << m {
        return Err(Error::InvalidArgument(format!("diagonal length {} is not a power of two", diagonal.len())));
    }
    let mut psi = StateVector::plus_state(m)?;
    for (&g, &b) in schedule.gammas().iter().zip(schedule.betas()) {
        psi.apply_cost_layer(diagonal, g)?;
        psi.apply_mixer_layer(b);
    }
    Ok(psi)
}

/// `F_p(γ, β) = ⟨ψ_{γ,β}|Ĉ|ψ_{γ,β}⟩`.
pub fn expectation_at<T: Real>(diagonal: &[T], schedule: &AngleSchedule<T>) -> Result<T> {
    run_circuit(diagonal, schedule)?.expectation(diagonal)
}
