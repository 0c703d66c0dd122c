//! Monte-Carlo block-error-rate curves.

use std::io::Write;

use rayon::prelude::*;

use crate::channel::{bdd_reference, ChannelKind, ChannelModel};
use crate::codes::Code;
use crate::decoder::SyndromeDecoder;
use crate::error::{Error, Result};
use crate::rng::stream;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveConfig {
    pub epsilons: Vec<f64>,
    /// Stop a point after this many failures.
    pub max_failures: usize,
    /// ... or after this many trials.
    pub max_trials: usize,
    pub seed: u64,
}

impl CurveConfig {
    pub fn new(epsilons: Vec<f64>, seed: u64) -> Self {
        Self {
            epsilons,
            max_failures: 500,
            max_trials: 1_000_000,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub epsilon: f64,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl CurvePoint {
    pub fn contains(&self, value: f64) -> bool {
        (self.ci_low..=self.ci_high).contains(&value)
    }
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// BSC for classical codes, depolarizing for stabilizer codes.
pub fn channel_for(code: &Code, epsilon: f64) -> Result<ChannelModel> {
    let kind = match code {
        Code::Classical(_) => ChannelKind::Bsc,
        Code::Quantum(_) => ChannelKind::Depolarizing,
    };
    ChannelModel::new(kind, epsilon)
}

const CHUNK: usize = 2048;

/// One curve point. Trial `t` at point `index` draws everything from the
/// stream `(seed, index, t)`; trials run in parallel chunks and are then
/// scanned in order, so the stop is at exactly `max_failures`.
pub fn run_point(
    decoder: &dyn SyndromeDecoder,
    epsilon: f64,
    index: usize,
    cfg: &CurveConfig,
) -> Result<CurvePoint> {
    let channel = channel_for(decoder.code(), epsilon)?;
    let n = decoder.code().n();
    let mut trials = 0usize;
    let mut failures = 0usize;
    'outer: while trials < cfg.max_trials && failures < cfg.max_failures {
        let end = (trials + CHUNK).min(cfg.max_trials);
        let flags: Vec<bool> = (trials..end)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream(cfg.seed, &[index as u64, t as u64]);
                let e = channel.sample(n, &mut rng);
                decoder.run_trial(&e, &mut rng).map(|o| o.failure)
            })
            .collect::<Result<_>>()?;
        for f in flags {
            trials += 1;
            if f {
                failures += 1;
                if failures >= cfg.max_failures {
                    break 'outer;
                }
            }
        }
    }
    let (ci_low, ci_high) = wilson_interval(failures, trials, Z95);
    Ok(CurvePoint {
        epsilon,
        trials,
        failures,
        rate: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
        ci_low,
        ci_high,
    })
}

pub fn error_rate_curve(decoder: &dyn SyndromeDecoder, cfg: &CurveConfig) -> Result<Vec<CurvePoint>> {
    if cfg.max_failures == 0 || cfg.max_trials == 0 {
        return Err(Error::InvalidArgument("stop rule needs positive failure and trial limits".into()));
    }
    cfg.epsilons
        .iter()
        .enumerate()
        .map(|(i, &eps)| run_point(decoder, eps, i, cfg))
        .collect()
}

pub const CSV_HEADER: &str = "epsilon,trials,failures,block_error_rate,ci_low,ci_high,decoder,code,p,T";

/// Labels shared by every row of one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveLabels {
    pub decoder: String,
    pub code: String,
    pub p: Option<usize>,
    pub shots: Option<usize>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Simulated rows, then (if `bdd_distance` is set) one `bdd` row per epsilon.
pub fn write_csv<W: Write>(
    mut out: W,
    points: &[CurvePoint],
    labels: &CurveLabels,
    bdd_distance: Option<(usize, usize)>,
) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for pt in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            pt.epsilon,
            pt.trials,
            pt.failures,
            pt.rate,
            pt.ci_low,
            pt.ci_high,
            labels.decoder,
            labels.code,
            opt(labels.p),
            opt(labels.shots)
        )?;
    }
    if let Some((n, d)) = bdd_distance {
        for pt in points {
            writeln!(
                out,
                "{},,,{},,,bdd,{},,",
                pt.epsilon,
                bdd_reference(n, d, pt.epsilon),
                labels.code
            )?;
        }
    }
    Ok(())
}
