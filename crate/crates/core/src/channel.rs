//! Memoryless noise channels and the bounded-distance reference curve.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::generalized_weight;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Bsc,
    Depolarizing,
}

/// Binary symmetric or depolarizing channel with rate `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    pub epsilon: f64,
}

impl ChannelModel {
    pub fn new(kind: ChannelKind, epsilon: f64) -> Result<Self> {
        let max = match kind {
            ChannelKind::Bsc => 0.5,
            ChannelKind::Depolarizing => 0.75,
        };
        if !(0.0..=max).contains(&epsilon) {
            return Err(Error::InvalidChannel(format!(
                "{kind:?} rate must lie in [0, {max}], got {epsilon}"
            )));
        }
        Ok(Self { kind, epsilon })
    }

    pub fn bsc(epsilon: f64) -> Result<Self> {
        Self::new(ChannelKind::Bsc, epsilon)
    }

    pub fn depolarizing(epsilon: f64) -> Result<Self> {
        Self::new(ChannelKind::Depolarizing, epsilon)
    }

    /// An error on `n` bits (BSC) or `n` qubits (depolarizing, length `2n`).
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> BitVector {
        match self.kind {
            ChannelKind::Bsc => sample_bsc(n, self.epsilon, rng),
            ChannelKind::Depolarizing => sample_depolarizing(n, self.epsilon, rng),
        }
    }

    /// Probability of a specific error pattern.
    pub fn probability(&self, e: &BitVector) -> Result<f64> {
        match self.kind {
            ChannelKind::Bsc => {
                let w = e.weight() as i32;
                Ok(self.epsilon.powi(w) * (1.0 - self.epsilon).powi(e.len() as i32 - w))
            }
            ChannelKind::Depolarizing => p_dep(e, self.epsilon),
        }
    }
}

/// I.i.d. Bernoulli(`epsilon`) bits.
pub fn sample_bsc<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> BitVector {
    let mut e = BitVector::zeros(n);
    for i in 0..n {
        if rng.gen::<f64>() < epsilon {
            e.set(i, true);
        }
    }
    e
}

/// Per qubit: I with probability `1 − ε`, else X, Y or Z with `ε/3` each.
pub fn sample_depolarizing<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> BitVector {
    let mut e = BitVector::zeros(2 * n);
    for q in 0..n {
        let u: f64 = rng.gen();
        if u >= epsilon {
            continue;
        }
        // X, Y, Z on thirds of [0, ε)
        let third = (3.0 * u / epsilon) as usize;
        match third.min(2) {
            0 => e.set(q, true),
            1 => {
                e.set(q, true);
                e.set(n + q, true);
            }
            _ => e.set(n + q, true),
        }
    }
    e
}

/// `(ε/3)^{gw(e)} (1 − ε)^{n − gw(e)}`.
pub fn p_dep(e: &BitVector, epsilon: f64) -> Result<f64> {
    let gw = generalized_weight(e)? as i32;
    let n = (e.len() / 2) as i32;
    Ok((epsilon / 3.0).powi(gw) * (1.0 - epsilon).powi(n - gw))
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Block error rate of a decoder correcting every error of weight `≤ ⌊(d−1)/2⌋`.
pub fn bdd_reference(n: usize, d: usize, epsilon: f64) -> f64 {
    let t = d.saturating_sub(1) / 2;
    let ok: f64 = (0..=t.min(n))
        .map(|j| binomial(n as u64, j as u64) * epsilon.powi(j as i32) * (1.0 - epsilon).powi((n - j) as i32))
        .sum();
    (1.0 - ok).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rate_bounds() {
        assert!(ChannelModel::bsc(0.5).is_ok());
        assert!(ChannelModel::bsc(0.51).is_err());
        assert!(ChannelModel::depolarizing(0.75).is_ok());
        assert!(ChannelModel::depolarizing(-0.1).is_err());
        assert!(ChannelModel::depolarizing(f64::NAN).is_err());
    }

    #[test]
    fn zero_rate_gives_zero_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_bsc(9, 0.0, &mut rng).is_zero());
        assert!(sample_depolarizing(9, 0.0, &mut rng).is_zero());
    }

    #[test]
    fn bsc_mean_weight() {
        let (n, eps, draws) = (7, 0.1, 100_000);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let total: usize = (0..draws).map(|_| sample_bsc(n, eps, &mut rng).weight()).sum();
        let mean = total as f64 / draws as f64;
        let sigma = (n as f64 * eps * (1.0 - eps) / draws as f64).sqrt();
        assert!((mean - n as f64 * eps).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn depolarizing_pauli_frequencies() {
        let (n, eps, draws) = (5, 0.3, 60_000);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut counts = [0usize; 3];
        let mut gw_total = 0;
        for _ in 0..draws {
            let e = sample_depolarizing(n, eps, &mut rng);
            gw_total += generalized_weight(&e).unwrap();
            match (e.get(0), e.get(n)) {
                (true, false) => counts[0] += 1,
                (true, true) => counts[1] += 1,
                (false, true) => counts[2] += 1,
                _ => {}
            }
        }
        let mean = gw_total as f64 / draws as f64;
        let sigma = (n as f64 * eps * (1.0 - eps) / draws as f64).sqrt();
        assert!((mean - n as f64 * eps).abs() < 3.0 * sigma);
        let expect = draws as f64 * eps / 3.0;
        let sd = (expect * (1.0 - eps / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - expect).abs() < 4.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn p_dep_values() {
        let zero = BitVector::zeros(10);
        assert_relative_eq!(p_dep(&zero, 0.2).unwrap(), 0.8f64.powi(5));
        let y1: BitVector = "10000|10000".parse().unwrap();
        assert_relative_eq!(p_dep(&y1, 0.3).unwrap(), 0.1 * 0.7f64.powi(4), epsilon = 1e-15);
        // sums to one over all 4^n patterns
        let total: f64 = (0..1u64 << 6).map(|x| p_dep(&BitVector::from_u64(x, 6), 0.4).unwrap()).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bdd_values() {
        assert_eq!(bdd_reference(7, 3, 0.0), 0.0);
        let direct = 1.0 - 0.9f64.powi(7) - 7.0 * 0.1 * 0.9f64.powi(6);
        assert_relative_eq!(bdd_reference(7, 3, 0.1), direct, epsilon = 1e-14);
        assert!((bdd_reference(7, 3, 0.1) - 0.1497).abs() < 5e-5);
        assert_relative_eq!(bdd_reference(5, 3, 0.2), 1.0 - 0.8f64.powi(5) - 5.0 * 0.2 * 0.8f64.powi(4));
        assert_relative_eq!(bdd_reference(4, 1, 0.25), 1.0 - 0.75f64.powi(4));
    }
}
