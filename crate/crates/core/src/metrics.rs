//! Coset posteriors under depolarizing noise, QAOA output distributions over
//! the same coset labeling, and KL / JS divergences (base 2).

use std::io::Write;

use serde::Serialize;

use crate::codes::{generalized_weight, StabilizerCode};
use crate::engine::{run_circuit, AngleSchedule};
use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;
use crate::hamiltonian::{quantum_generator_cost, DEFAULT_QUBIT_CAP};
use crate::scalar::Real;

/// A distribution over `u ∈ {0,1}^{n+k}` labeling the coset `uG_S + z_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetDistribution<T> {
    pub syndrome: BitVector,
    pub offset: BitVector,
    pub probs: Vec<T>,
}

impl<T: Real> CosetDistribution<T> {
    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// Indices of the `k` largest masses, ties by smaller index.
    pub fn top(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.probs.len()).collect();
        idx.sort_by(|&a, &b| {
            self.probs[b]
                .partial_cmp(&self.probs[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        idx.truncate(k);
        idx
    }
}

fn coset_size(code: &StabilizerCode) -> Result<usize> {
    let m = code.n + code.k;
    if m > DEFAULT_QUBIT_CAP {
        return Err(Error::CapExceeded {
            m,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    Ok(1 << m)
}

/// `P(u|s) ∝ P_dep(uG_S + z)` over the coset of `z`.
pub fn posterior_with_offset<T: Real>(code: &StabilizerCode, z: &BitVector, epsilon: f64) -> Result<CosetDistribution<T>> {
    if !(epsilon > 0.0 && epsilon < 0.75) {
        return Err(Error::InvalidChannel(format!("depolarizing rate must lie in (0, 3/4), got {epsilon}")));
    }
    check_dim("offset length", 2 * code.n, z.len())?;
    let size = coset_size(code)?;
    let m = code.n + code.k;
    // ratio (ε/3)/(1−ε) per unit of generalized weight; the common factor cancels
    let ratio = T::lit(epsilon / 3.0 / (1.0 - epsilon));
    let mut weights = Vec::with_capacity(size);
    for u in 0..size as u64 {
        let e = &code.g_s.left_mul(&BitVector::from_u64(u, m))? ^ z;
        weights.push(ratio.powi(generalized_weight(&e)? as i32));
    }
    let total: T = weights.iter().copied().sum();
    Ok(CosetDistribution {
        syndrome: code.syndrome(z)?,
        offset: z.clone(),
        probs: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// Posterior for syndrome `s` with the deterministic coset representative.
pub fn posterior<T: Real>(code: &StabilizerCode, s: &BitVector, epsilon: f64) -> Result<CosetDistribution<T>> {
    let z = code.coset_representative(s)?;
    posterior_with_offset(code, &z, epsilon)
}

/// `Q(u|s) = |⟨u|ψ_{γ,β}⟩|²` for the generator-based Hamiltonian built from `z`.
pub fn qaoa_distribution_with_offset<T: Real>(
    code: &StabilizerCode,
    z: &BitVector,
    sched: &AngleSchedule<T>,
) -> Result<CosetDistribution<T>> {
    coset_size(code)?;
    let h = quantum_generator_cost::<T>(&code.g_s, z)?;
    let psi = run_circuit(&h.materialize()?, sched)?;
    Ok(CosetDistribution {
        syndrome: code.syndrome(z)?,
        offset: z.clone(),
        probs: psi.probabilities(),
    })
}

pub fn qaoa_distribution<T: Real>(
    code: &StabilizerCode,
    s: &BitVector,
    sched: &AngleSchedule<T>,
) -> Result<CosetDistribution<T>> {
    let z = code.coset_representative(s)?;
    qaoa_distribution_with_offset(code, &z, sched)
}

/// `D(P‖Q) = Σ P log₂(P/Q)`, with `0·log 0 = 0`.
pub fn kl<T: Real>(p: &[T], q: &[T]) -> Result<T> {
    check_dim("distribution lengths", p.len(), q.len())?;
    let mut d = T::zero();
    for (i, (&a, &b)) in p.iter().zip(q).enumerate() {
        if a <= T::zero() {
            continue;
        }
        if b <= T::zero() {
            return Err(Error::NotAbsolutelyContinuous { index: i });
        }
        d = d + a * (a / b).log2();
    }
    Ok(d)
}

/// `J(P‖Q) = ½D(P‖M) + ½D(Q‖M)` with `M = (P+Q)/2`; lies in `[0, 1]`.
pub fn js<T: Real>(p: &[T], q: &[T]) -> Result<T> {
    check_dim("distribution lengths", p.len(), q.len())?;
    let half = T::lit(0.5);
    let mut total = T::zero();
    for (&a, &b) in p.iter().zip(q) {
        let m = half * (a + b);
        // each pair enters symmetrically, so js(P,Q) == js(Q,P) bit for bit
        let term = |x: T| if x > T::zero() { x * (x / m).log2() } else { T::zero() };
        let (ta, tb) = (term(a), term(b));
        total = total + half * (if ta <= tb { ta + tb } else { tb + ta });
    }
    Ok(total.max(T::zero()).min(T::one()))
}

/// One row of the top-k table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopEntry {
    pub u_decimal: u64,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    pub code: String,
    pub syndrome: BitVector,
    pub offset: BitVector,
    pub epsilon: f64,
    pub schedule: AngleSchedule<f64>,
    pub posterior: Vec<f64>,
    pub qaoa: Vec<f64>,
    pub js: f64,
    pub kl_pm: f64,
    pub kl_qm: f64,
    /// Largest-`Q` coset labels.
    pub top: Vec<TopEntry>,
}

/// P, Q and their divergences for the coset of `z`, with a top-`k` table by `Q`.
pub fn distribution_report(
    code: &StabilizerCode,
    z: &BitVector,
    epsilon: f64,
    sched: &AngleSchedule<f64>,
    k: usize,
) -> Result<DistributionReport> {
    let p = posterior_with_offset::<f64>(code, z, epsilon)?;
    let q = qaoa_distribution_with_offset(code, z, sched)?;
    let m: Vec<f64> = p.probs.iter().zip(&q.probs).map(|(a, b)| 0.5 * (a + b)).collect();
    let kl_pm = kl(&p.probs, &m)?;
    let kl_qm = kl(&q.probs, &m)?;
    let top = q
        .top(k)
        .into_iter()
        .map(|u| TopEntry {
            u_decimal: u as u64,
            p: p.probs[u],
            q: q.probs[u],
        })
        .collect();
    Ok(DistributionReport {
        code: code.name.clone(),
        syndrome: p.syndrome.clone(),
        offset: z.clone(),
        epsilon,
        schedule: sched.clone(),
        js: js(&p.probs, &q.probs)?,
        kl_pm,
        kl_qm,
        posterior: p.probs,
        qaoa: q.probs,
        top,
    })
}

impl DistributionReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "u_decimal,P,Q")?;
        for (u, (a, b)) in self.posterior.iter().zip(&self.qaoa).enumerate() {
            writeln!(out, "{u},{a},{b}")?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "code": self.code,
            "syndrome": self.syndrome.to_string(),
            "z_s": self.offset.to_symplectic_string(),
            "js": self.js,
            "kl_PM": self.kl_pm,
            "kl_QM": self.kl_qm,
            "epsilon": self.epsilon,
            "p": self.schedule.p(),
            "angles": {
                "gammas": self.schedule.gammas(),
                "betas": self.schedule.betas(),
            },
            "top": self.top,
        })
    }
}
