//! Sampling-based syndrome decoders and the success judgments.
//!
//! Every pipeline shares one decision rule: map each measured basis state to
//! an error candidate, keep those that reproduce the syndrome, and return the
//! lightest survivor (first occurrence wins ties). A zero syndrome decodes to
//! zero without running the circuit; no survivor also yields zero, with
//! `matched = false`.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::archive::AngleArchive;
use crate::codes::{Code, LinearCode, StabilizerCode};
use crate::engine::{run_circuit, AngleSchedule, Sampler};
use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;
use crate::hamiltonian::PenaltyParams;
use crate::problem::{Construction, DecodingProblem};
use crate::scalar::Real;

/// Decoder output for one syndrome.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub syndrome: BitVector,
    /// Candidates in sample order, before filtering.
    pub candidates: Vec<BitVector>,
    pub estimate: BitVector,
    /// Whether `estimate` reproduces `syndrome`.
    pub matched: bool,
}

/// A full trial: the channel error, what the decoder returned, and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodingOutcome {
    pub error: BitVector,
    pub decoded: Decoded,
    pub failure: bool,
}

impl Decoded {
    fn bypass(syndrome: &BitVector, len: usize) -> Self {
        Self {
            syndrome: syndrome.clone(),
            candidates: Vec::new(),
            estimate: BitVector::zeros(len),
            matched: true,
        }
    }
}

/// Apply the decision rule to sampled basis states.
pub fn select_candidate(
    problem: &DecodingProblem,
    s: &BitVector,
    offset: &BitVector,
    samples: &[u64],
) -> Result<Decoded> {
    let candidates: Vec<BitVector> = samples.iter().map(|&x| problem.candidate(x, offset)).collect();
    let mut best: Option<(usize, usize)> = None;
    for (i, c) in candidates.iter().enumerate() {
        if &problem.code.syndrome(c)? != s {
            continue;
        }
        let w = problem.error_weight(c);
        if best.is_none_or(|(_, bw)| w < bw) {
            best = Some((i, w));
        }
    }
    let (estimate, matched) = match best {
        Some((i, _)) => (candidates[i].clone(), true),
        None => (BitVector::zeros(problem.code.error_len()), false),
    };
    Ok(Decoded {
        syndrome: s.clone(),
        candidates,
        estimate,
        matched,
    })
}

/// Build the instance for `s`, run the circuit at `sched`, draw `shots`
/// samples and apply the decision rule.
pub fn decode_with<T: Real>(
    problem: &DecodingProblem,
    s: &BitVector,
    shots: usize,
    sched: &AngleSchedule<T>,
    seed: u64,
) -> Result<Decoded> {
    check_dim("syndrome length", problem.code.r(), s.len())?;
    if s.is_zero() {
        return Ok(Decoded::bypass(s, problem.code.error_len()));
    }
    let inst = problem.instance::<T>(s)?;
    let diagonal = inst.hamiltonian.materialize()?;
    let psi = run_circuit(&diagonal, sched)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = Sampler::new(&psi.probabilities())?.draw(shots, &mut rng)?;
    select_candidate(problem, s, &inst.offset, &samples)
}

/// Generator-based decoding of a classical code.
pub fn decode_generator_classical<T: Real>(
    code: &LinearCode,
    s: &BitVector,
    shots: usize,
    sched: &AngleSchedule<T>,
    seed: u64,
) -> Result<Decoded> {
    let problem = DecodingProblem::new(Code::Classical(code.clone()), Construction::Generator);
    decode_with(&problem, s, shots, sched, seed)
}

/// Check-based decoding of a classical code.
pub fn decode_check_classical<T: Real>(
    code: &LinearCode,
    s: &BitVector,
    shots: usize,
    sched: &AngleSchedule<T>,
    penalty: PenaltyParams,
    seed: u64,
) -> Result<Decoded> {
    let problem = DecodingProblem::new(Code::Classical(code.clone()), Construction::Check(penalty));
    decode_with(&problem, s, shots, sched, seed)
}

/// Generator-based decoding of a stabilizer code.
pub fn decode_generator_quantum<T: Real>(
    code: &StabilizerCode,
    s: &BitVector,
    shots: usize,
    sched: &AngleSchedule<T>,
    seed: u64,
) -> Result<Decoded> {
    let problem = DecodingProblem::new(Code::Quantum(code.clone()), Construction::Generator);
    decode_with(&problem, s, shots, sched, seed)
}

/// Check-based decoding of a stabilizer code.
pub fn decode_check_quantum<T: Real>(
    code: &StabilizerCode,
    s: &BitVector,
    shots: usize,
    sched: &AngleSchedule<T>,
    penalty: PenaltyParams,
    seed: u64,
) -> Result<Decoded> {
    let problem = DecodingProblem::new(Code::Quantum(code.clone()), Construction::Check(penalty));
    decode_with(&problem, s, shots, sched, seed)
}

/// Classical failure: the estimate differs from the error.
pub fn judge_classical(estimate: &BitVector, error: &BitVector) -> bool {
    estimate != error
}

/// Quantum failure: `estimate + error` is not a stabilizer.
pub fn judge_quantum(estimate: &BitVector, error: &BitVector, code: &StabilizerCode) -> Result<bool> {
    check_dim("estimate length", 2 * code.n, estimate.len())?;
    check_dim("error length", 2 * code.n, error.len())?;
    if code.syndrome(estimate)? != code.syndrome(error)? {
        return Err(Error::SyndromeMismatch);
    }
    Ok(!code.degenerate(estimate, error)?)
}

/// Failure verdict appropriate to the code.
///
/// An unmatched estimate may carry a different syndrome from the error; that
/// always counts as a failure rather than an error.
pub fn judge(code: &Code, estimate: &BitVector, error: &BitVector) -> Result<bool> {
    match code {
        Code::Classical(_) => Ok(judge_classical(estimate, error)),
        Code::Quantum(q) => match judge_quantum(estimate, error, q) {
            Err(Error::SyndromeMismatch) => Ok(true),
            other => other,
        },
    }
}

/// Anything that turns a syndrome into an error estimate.
pub trait SyndromeDecoder: Sync {
    fn name(&self) -> String;
    fn code(&self) -> &Code;
    fn decode(&self, s: &BitVector, rng: &mut ChaCha8Rng) -> Result<Decoded>;

    fn run_trial(&self, error: &BitVector, rng: &mut ChaCha8Rng) -> Result<DecodingOutcome> {
        let s = self.code().syndrome(error)?;
        let decoded = self.decode(&s, rng)?;
        let failure = judge(self.code(), &decoded.estimate, error)?;
        Ok(DecodingOutcome {
            error: error.clone(),
            decoded,
            failure,
        })
    }
}

struct CachedSyndrome {
    offset: BitVector,
    sampler: Sampler,
}

/// QAOA decoder with output distributions precomputed from archived angles.
pub struct QaoaDecoder {
    problem: DecodingProblem,
    p: usize,
    shots: usize,
    cache: HashMap<BitVector, CachedSyndrome>,
}

impl QaoaDecoder {
    /// Fails with [`Error::MissingAngles`] unless every nonzero reachable
    /// syndrome has a record at level `p`.
    pub fn new(problem: DecodingProblem, archive: &AngleArchive, p: usize, shots: usize) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument("need at least one shot".into()));
        }
        let mut cache = HashMap::new();
        for s in problem.code.reachable_syndromes() {
            if s.is_zero() {
                continue;
            }
            let record = archive
                .lookup(&problem, p, &s)
                .ok_or_else(|| Error::MissingAngles(s.to_string()))?;
            let inst = problem.instance::<f64>(&s)?;
            let psi = run_circuit(&inst.hamiltonian.materialize()?, &record.schedule()?)?;
            cache.insert(
                s,
                CachedSyndrome {
                    offset: inst.offset,
                    sampler: Sampler::new(&psi.probabilities())?,
                },
            );
        }
        Ok(Self {
            problem,
            p,
            shots,
            cache,
        })
    }

    pub fn problem(&self) -> &DecodingProblem {
        &self.problem
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn shots(&self) -> usize {
        self.shots
    }
}

impl SyndromeDecoder for QaoaDecoder {
    fn name(&self) -> String {
        format!("qaoa-{}", self.problem.construction.kind())
    }

    fn code(&self) -> &Code {
        &self.problem.code
    }

    fn decode(&self, s: &BitVector, rng: &mut ChaCha8Rng) -> Result<Decoded> {
        if s.is_zero() {
            return Ok(Decoded::bypass(s, self.problem.code.error_len()));
        }
        let entry = self.cache.get(s).ok_or_else(|| Error::MissingAngles(s.to_string()))?;
        let samples = entry.sampler.draw(self.shots, rng)?;
        select_candidate(&self.problem, s, &entry.offset, &samples)
    }
}

/// Exact minimum-(generalized-)weight decoder by exhaustive enumeration;
/// ties go to the smallest integer encoding.
pub struct CosetLeaderDecoder {
    code: Code,
    leaders: HashMap<BitVector, BitVector>,
}

/// Largest error length enumerated by [`CosetLeaderDecoder`].
pub const COSET_LEADER_MAX_BITS: usize = 24;

impl CosetLeaderDecoder {
    pub fn new(code: Code) -> Result<Self> {
        let len = code.error_len();
        if len > COSET_LEADER_MAX_BITS {
            return Err(Error::CapExceeded {
                m: len,
                cap: COSET_LEADER_MAX_BITS,
            });
        }
        let mut leaders: HashMap<BitVector, (usize, BitVector)> = HashMap::new();
        for x in 0..1u64 << len {
            let e = BitVector::from_u64(x, len);
            let w = code.error_weight(&e);
            let s = code.syndrome(&e)?;
            match leaders.get(&s) {
                Some((bw, _)) if *bw <= w => {}
                _ => {
                    leaders.insert(s, (w, e));
                }
            }
        }
        Ok(Self {
            code,
            leaders: leaders.into_iter().map(|(s, (_, e))| (s, e)).collect(),
        })
    }

    pub fn leader(&self, s: &BitVector) -> Option<&BitVector> {
        self.leaders.get(s)
    }
}

impl SyndromeDecoder for CosetLeaderDecoder {
    fn name(&self) -> String {
        "coset-leader".into()
    }

    fn code(&self) -> &Code {
        &self.code
    }

    fn decode(&self, s: &BitVector, _rng: &mut ChaCha8Rng) -> Result<Decoded> {
        let e = self
            .leaders
            .get(s)
            .ok_or_else(|| Error::InconsistentSyndrome(s.to_string()))?;
        Ok(Decoded {
            syndrome: s.clone(),
            candidates: vec![e.clone()],
            estimate: e.clone(),
            matched: true,
        })
    }
}
