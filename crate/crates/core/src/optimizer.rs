//! Derivative-free maximization of `F_p` over the angle torus `[0, π)^{2p}`.
//!
//! The objective has period π in every coordinate, so the local search runs
//! unconstrained in `R^{2p}` and only the reported angles are wrapped.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{AngleSchedule, StateVector};
use crate::error::{Error, Result};
use crate::hamiltonian::DiagonalHamiltonian;
use crate::rng::derive_seed;
use crate::scalar::Real;

/// `F_p` as a function of the flat angle vector `[γ_1..γ_p, β_1..β_p]`.
#[derive(Debug)]
pub struct Objective<T> {
    diagonal: Vec<T>,
    p: usize,
    evaluations: AtomicUsize,
}

impl<T: Real> Objective<T> {
    pub fn new(h: &DiagonalHamiltonian<T>, p: usize) -> Result<Self> {
        Self::from_diagonal(h.materialize()?, p)
    }

    pub fn from_diagonal(diagonal: Vec<T>, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("level p must be ≥ 1".into()));
        }
        if !diagonal.len().is_power_of_two() || diagonal.len() < 2 {
            return Err(Error::InvalidArgument("diagonal length must be 2^m, m ≥ 1".into()));
        }
        Ok(Self {
            diagonal,
            p,
            evaluations: AtomicUsize::new(0),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        2 * self.p
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// `F_p` at unwrapped angles.
    pub fn evaluate(&self, flat: &[T]) -> T {
        assert_eq!(flat.len(), 2 * self.p, "angle vector length");
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let m = self.diagonal.len().trailing_zeros() as usize;
        let mut psi = StateVector::plus_state_with_cap(m, usize::MAX).expect("validated size");
        for layer in 0..self.p {
            psi.apply_cost_layer(&self.diagonal, flat[layer]).expect("matching length");
            psi.apply_mixer_layer(flat[self.p + layer]);
        }
        psi.expectation(&self.diagonal).expect("matching length")
    }

    pub fn evaluate_schedule(&self, s: &AngleSchedule<T>) -> T {
        self.evaluate(&s.to_flat())
    }

    /// Final state amplitudes at a schedule (no evaluation counted).
    pub fn state(&self, s: &AngleSchedule<T>) -> Vec<Complex<T>> {
        crate::engine::run_circuit(&self.diagonal, s)
            .expect("validated size")
            .amplitudes()
            .to_vec()
    }
}

/// Local-search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmOptions<T> {
    /// Stop once both the value spread and the vertex spread drop below this.
    pub tol: T,
    pub max_iter: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: T,
}

impl<T: Real> NmOptions<T> {
    /// `tol = 1e-6`, `max_iter = 400 · 2p`.
    pub fn for_level(p: usize) -> Self {
        Self {
            tol: T::lit(1e-6),
            max_iter: 400 * 2 * p,
            initial_step: T::lit(0.25),
        }
    }
}

/// One local search: where it started and how the best value evolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct StartTrace<T> {
    pub start: Vec<T>,
    pub best_value: T,
    /// Best-so-far value after each iteration (or hop); nondecreasing.
    pub trace: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct OptimizerReport<T> {
    pub best: AngleSchedule<T>,
    pub best_value: T,
    pub evaluations: usize,
    pub strategy: String,
    pub starts: Vec<StartTrace<T>>,
}

/// Result of a raw simplex search on an arbitrary function.
#[derive(Debug, Clone)]
pub struct NmResult<T> {
    pub x: Vec<T>,
    pub value: T,
    pub trace: Vec<T>,
    pub evaluations: usize,
    pub iterations: usize,
}

/// Nelder–Mead maximization of `f` (reflection 1, expansion 2, contraction ½, shrink ½).
pub fn nelder_mead_fn<T: Real, F: Fn(&[T]) -> T>(f: F, x0: &[T], opts: &NmOptions<T>) -> NmResult<T> {
    let dim = x0.len();
    assert!(dim >= 1, "need at least one coordinate");
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut evals = 0usize;
    // minimize g = −f
    let mut g = |x: &[T]| {
        evals += 1;
        -f(x)
    };

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), g(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] = x[i] + opts.initial_step;
        let v = g(&x);
        simplex.push((x, v));
    }

    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        trace.push(-simplex[0].1);
        let best = &simplex[0];
        let f_spread = simplex[1..]
            .iter()
            .map(|(_, v)| (*v - best.1).abs())
            .fold(T::zero(), T::max);
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        if (f_spread <= opts.tol && x_spread <= opts.tol) || iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let worst = simplex[dim].clone();
        let centroid: Vec<T> = (0..dim)
            .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<T>() / T::lit(dim as f64))
            .collect();
        let toward = |coef: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(&c, &w)| c + coef * (c - w))
                .collect()
        };

        let xr = toward(T::one());
        let gr = g(&xr);
        if gr < simplex[0].1 {
            let xe = toward(two);
            let ge = g(&xe);
            simplex[dim] = if ge < gr { (xe, ge) } else { (xr, gr) };
            continue;
        }
        if gr < simplex[dim - 1].1 {
            simplex[dim] = (xr, gr);
            continue;
        }
        let accepted = if gr < worst.1 {
            let xc = toward(half);
            let gc = g(&xc);
            (gc <= gr).then_some((xc, gc))
        } else {
            let xcc = toward(-half);
            let gcc = g(&xcc);
            (gcc < worst.1).then_some((xcc, gcc))
        };
        match accepted {
            Some(p) => simplex[dim] = p,
            None => {
                let x_best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<T> = x_best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(&b, &v)| b + half * (v - b))
                        .collect();
                    let v = g(&x);
                    *vertex = (x, v);
                }
            }
        }
    }
    let (x, v) = simplex.swap_remove(0);
    NmResult {
        x,
        value: -v,
        trace,
        evaluations: evals,
        iterations,
    }
}

fn finish<T: Real>(obj: &Objective<T>, x: &[T], value: T) -> (AngleSchedule<T>, T) {
    let schedule = AngleSchedule::from_flat(x).expect("finite angles");
    // re-evaluate at the wrapped angles so the report is self-consistent
    let wrapped = obj.evaluate_schedule(&schedule);
    debug_assert!((wrapped - value).abs() <= T::lit(1e-6) * (T::one() + value.abs()));
    (schedule, wrapped)
}

/// Single Nelder–Mead search from `start`.
pub fn nelder_mead<T: Real>(
    obj: &Objective<T>,
    start: &AngleSchedule<T>,
    opts: &NmOptions<T>,
) -> OptimizerReport<T> {
    let x0 = start.to_flat();
    let res = nelder_mead_fn(|x| obj.evaluate(x), &x0, opts);
    let (best, best_value) = finish(obj, &res.x, res.value);
    OptimizerReport {
        best,
        best_value,
        evaluations: res.evaluations + 1,
        strategy: "nelder-mead".into(),
        starts: vec![StartTrace {
            start: x0,
            best_value,
            trace: res.trace,
        }],
    }
}

/// Largest `κ ≥ 1` with `κ^{dim} ≤ budget`.
pub fn grid_resolution(budget: usize, dim: usize) -> usize {
    let mut kappa = 1usize;
    while (kappa + 1).checked_pow(dim as u32).is_some_and(|v| v <= budget) {
        kappa += 1;
    }
    kappa
}

/// Cell centers of the uniform `κ`-per-axis grid on `[0, π)^{dim}`.
pub fn grid_starts<T: Real>(kappa: usize, dim: usize) -> Vec<Vec<T>> {
    let total = kappa.pow(dim as u32);
    let cell = T::PI() / T::lit(kappa as f64);
    (0..total)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let i = idx % kappa;
                    idx /= kappa;
                    (T::lit(i as f64) + T::lit(0.5)) * cell
                })
                .collect()
        })
        .collect()
}

/// Pick the best report; ties go to the earliest.
fn best_of<T: Real>(reports: &[(Vec<T>, NmResult<T>)]) -> usize {
    let mut best = 0;
    for (i, (_, r)) in reports.iter().enumerate().skip(1) {
        if r.value > reports[best].1.value {
            best = i;
        }
    }
    best
}

/// Nelder–Mead from every point of the largest grid fitting in `budget`.
pub fn multistart<T: Real>(obj: &Objective<T>, budget: usize, opts: &NmOptions<T>) -> Result<OptimizerReport<T>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("multistart budget must be ≥ 1".into()));
    }
    let kappa = grid_resolution(budget, obj.dim());
    let starts = grid_starts::<T>(kappa, obj.dim());
    let runs: Vec<(Vec<T>, NmResult<T>)> = starts
        .into_par_iter()
        .map(|x0| {
            let r = nelder_mead_fn(|x| obj.evaluate(x), &x0, opts);
            (x0, r)
        })
        .collect();
    let idx = best_of(&runs);
    let (best, best_value) = finish(obj, &runs[idx].1.x, runs[idx].1.value);
    Ok(OptimizerReport {
        best,
        best_value,
        evaluations: runs.iter().map(|(_, r)| r.evaluations).sum::<usize>() + 1,
        strategy: format!("multistart(kappa={kappa})"),
        starts: runs
            .into_iter()
            .map(|(start, r)| StartTrace {
                start,
                best_value: r.value,
                trace: r.trace,
            })
            .collect(),
    })
}

fn hop_search<T: Real>(
    obj: &Objective<T>,
    x0: &[T],
    hops: usize,
    step: T,
    seed: u64,
    opts: &NmOptions<T>,
) -> (NmResult<T>, Vec<T>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = nelder_mead_fn(|x| obj.evaluate(x), x0, opts);
    let mut evaluations = best.evaluations;
    let mut trace = vec![best.value];
    for _ in 0..hops {
        let trial: Vec<T> = best
            .x
            .iter()
            .map(|&a| (a + T::lit(rng.gen_range(-1.0..=1.0)) * step).wrap_pi())
            .collect();
        let r = nelder_mead_fn(|x| obj.evaluate(x), &trial, opts);
        evaluations += r.evaluations;
        if r.value > best.value {
            best = r;
        }
        trace.push(best.value);
    }
    best.evaluations = evaluations;
    (best, trace)
}

/// Local search, then `hops` uniform perturbations of the incumbent, each
/// followed by a local search and accepted only if strictly better.
pub fn basin_hopping<T: Real>(
    obj: &Objective<T>,
    start: &AngleSchedule<T>,
    hops: usize,
    step: T,
    seed: u64,
    opts: &NmOptions<T>,
) -> Result<OptimizerReport<T>> {
    if step <= T::zero() {
        return Err(Error::InvalidArgument("basin-hopping step must be positive".into()));
    }
    let x0 = start.to_flat();
    let (res, trace) = hop_search(obj, &x0, hops, step, seed, opts);
    let (best, best_value) = finish(obj, &res.x, res.value);
    Ok(OptimizerReport {
        best,
        best_value,
        evaluations: res.evaluations + 1,
        strategy: format!("basin-hopping(hops={hops})"),
        starts: vec![StartTrace {
            start: x0,
            best_value,
            trace,
        }],
    })
}

/// Basin hopping from all-`(0,0)`, all-`(π/8,π/8)`, all-`(1,1)` and a random
/// schedule; the best result wins, ties going to the earlier start.
pub fn nm_with_canonical_starts<T: Real>(
    obj: &Objective<T>,
    hops: usize,
    step: T,
    seed: u64,
    opts: &NmOptions<T>,
) -> Result<OptimizerReport<T>> {
    if step <= T::zero() {
        return Err(Error::InvalidArgument("basin-hopping step must be positive".into()));
    }
    let p = obj.p();
    let eighth = T::PI() / T::lit(8.0);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[u64::MAX]));
    let random: Vec<T> = (0..2 * p).map(|_| T::lit(rng.gen_range(0.0..std::f64::consts::PI))).collect();
    let starts = [
        vec![T::zero(); 2 * p],
        vec![eighth; 2 * p],
        vec![T::one(); 2 * p],
        random,
    ];
    let runs: Vec<(Vec<T>, (NmResult<T>, Vec<T>))> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, x0)| {
            let r = hop_search(obj, &x0, hops, step, derive_seed(seed, &[i as u64]), opts);
            (x0, r)
        })
        .collect();
    let mut idx = 0;
    for (i, (_, (r, _))) in runs.iter().enumerate().skip(1) {
        if r.value > runs[idx].1 .0.value {
            idx = i;
        }
    }
    let (best, best_value) = finish(obj, &runs[idx].1 .0.x, runs[idx].1 .0.value);
    Ok(OptimizerReport {
        best,
        best_value,
        evaluations: runs.iter().map(|(_, (r, _))| r.evaluations).sum::<usize>() + 1,
        strategy: format!("nm-basin-hopping(hops={hops})"),
        starts: runs
            .into_iter()
            .map(|(start, (r, trace))| StartTrace {
                start,
                best_value: r.value,
                trace,
            })
            .collect(),
    })
}

/// How to pick angles for one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Multistart { budget: usize },
    BasinHopping { hops: usize, step: f64 },
    /// Run both and keep the better.
    Best { budget: usize, hops: usize, step: f64 },
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Best {
            budget: 256,
            hops: 20,
            step: 0.5,
        }
    }
}

pub fn optimize<T: Real>(obj: &Objective<T>, strategy: Strategy, seed: u64) -> Result<OptimizerReport<T>> {
    let opts = NmOptions::for_level(obj.p());
    match strategy {
        Strategy::Multistart { budget } => multistart(obj, budget, &opts),
        Strategy::BasinHopping { hops, step } => nm_with_canonical_starts(obj, hops, T::lit(step), seed, &opts),
        Strategy::Best { budget, hops, step } => {
            let a = multistart(obj, budget, &opts)?;
            let b = nm_with_canonical_starts(obj, hops, T::lit(step), seed, &opts)?;
            Ok(if b.best_value > a.best_value { b } else { a })
        }
    }
}
