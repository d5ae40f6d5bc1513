//! Monte-Carlo estimates of outage, end-to-end symbol error probability and
//! capacity, reproducible bit-for-bit for a given seed and trial count.
//!
//! Trials are grouped into fixed blocks of [`BLOCK_TRIALS`]; block `i` draws
//! from ChaCha8 stream `i` of the root seed. Block statistics are merged in a
//! fixed binary tree over block indices, so neither the worker count nor the
//! batch size changes a single bit of the result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channels::{alpha_mu_sample, egg_sample};
use crate::error::{invalid, Result};
use crate::metrics::{CapacityOptions, Scenario};

/// Trials per random stream.
pub const BLOCK_TRIALS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub root_seed: u64,
    /// Trials handed to a worker at a time, rounded up to whole blocks.
    pub batch_size: u64,
    pub workers: usize,
}

impl SimConfig {
    /// `trials` with default batch size and one worker per available core.
    pub fn new(trials: u64, root_seed: u64) -> Self {
        Self {
            trials,
            root_seed,
            batch_size: (64 * BLOCK_TRIALS).min(trials.max(1)),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1000 {
            return Err(invalid(format!("trials = {} below 1000", self.trials)));
        }
        if self.batch_size == 0 || self.batch_size > self.trials {
            return Err(invalid(format!(
                "batch_size = {} must lie in [1, trials = {}]",
                self.batch_size, self.trials
            )));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::new(1_000_000, 0x5eed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let fb = b.n as f64 / n as f64;
        Moments {
            n,
            mean: a.mean + d * fb,
            m2: a.m2 + b.m2 + d * d * a.n as f64 * fb,
        }
    }
}

fn tree_merge(blocks: &[Moments]) -> Moments {
    match blocks.len() {
        0 => Moments::default(),
        1 => blocks[0],
        n => Moments::merge(tree_merge(&blocks[..n / 2]), tree_merge(&blocks[n / 2..])),
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Moments of `trial(rng)` over `cfg.trials` draws.
fn run<F>(cfg: &SimConfig, trial: F) -> Result<Moments>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    cfg.validate()?;
    let n_blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let per_batch = cfg.batch_size.div_ceil(BLOCK_TRIALS).max(1) as usize;
    let block = |b: u64| {
        let mut rng = block_rng(cfg.root_seed, b);
        let len = BLOCK_TRIALS.min(cfg.trials - b * BLOCK_TRIALS);
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(trial(&mut rng));
        }
        m
    };
    let indices: Vec<u64> = (0..n_blocks).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let blocks: Vec<Moments> = pool.install(|| {
        indices
            .par_chunks(per_batch)
            .flat_map_iter(|chunk| chunk.iter().map(|&b| block(b)).collect::<Vec<_>>())
            .collect()
    });
    Ok(tree_merge(&blocks))
}

fn sample_std_error(m: &Moments) -> f64 {
    (m.m2 / (m.n as f64 - 1.0) / m.n as f64).sqrt()
}

fn draw_hops(s: &Scenario, rng: &mut ChaCha8Rng) -> (f64, f64) {
    (egg_sample(&s.uwo, rng), alpha_mu_sample(&s.rf, rng))
}

/// Fraction of trials with `min(γ₁, γ₂) ≤ γ_out`.
pub fn simulate_outage(s: &Scenario, cfg: &SimConfig) -> Result<SimEstimate> {
    s.validate()?;
    let g_out = s.threshold_snr;
    let m = run(cfg, |rng| {
        let (a, b) = draw_hops(s, rng);
        if a.min(b) <= g_out {
            1.0
        } else {
            0.0
        }
    })?;
    let p = m.mean;
    Ok(SimEstimate {
        value: p,
        stderr: (p * (1.0 - p) / m.n as f64).sqrt(),
        trials: m.n,
    })
}

#[inline]
fn symbol_error(s: &Scenario, snr: f64) -> f64 {
    0.5 * s.modulation.eta * libm::erfc((s.modulation.beta * snr).sqrt())
}

/// End-to-end ASEP with the conditional-expectation estimator: each trial
/// contributes `e₁ + e₂ − 2e₁e₂` with `e_i = (η/2) erfc(√(βγ_i))`.
pub fn simulate_asep(s: &Scenario, cfg: &SimConfig) -> Result<SimEstimate> {
    s.validate()?;
    let m = run(cfg, |rng| {
        let (a, b) = draw_hops(s, rng);
        let (e1, e2) = (symbol_error(s, a), symbol_error(s, b));
        e1 + e2 - 2.0 * e1 * e2
    })?;
    Ok(SimEstimate {
        value: m.mean,
        stderr: sample_std_error(&m),
        trials: m.n,
    })
}

/// End-to-end ASEP by simulating one antipodal symbol per hop in unit-variance
/// Gaussian noise; the relay forwards its decision. Needs `η ≤ 1`.
pub fn simulate_asep_bitlevel(s: &Scenario, cfg: &SimConfig) -> Result<SimEstimate> {
    s.validate()?;
    let (eta, beta) = (s.modulation.eta, s.modulation.beta);
    if eta > 1.0 {
        return Err(invalid(format!("bit-level simulation needs η ≤ 1, got {eta}")));
    }
    let hop = |rng: &mut ChaCha8Rng, snr: f64| {
        let noise: f64 = rng.sample(StandardNormal);
        let thinning: f64 = rng.random();
        thinning < eta && noise > (2.0 * beta * snr).sqrt()
    };
    let m = run(cfg, |rng| {
        let (a, b) = draw_hops(s, rng);
        let (x, y) = (hop(rng, a), hop(rng, b));
        if x != y {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(SimEstimate {
        value: m.mean,
        stderr: sample_std_error(&m),
        trials: m.n,
    })
}

/// Mean of `log₂(1 + min(γ₁, γ₂))`, halved for a half-duplex relay.
pub fn simulate_capacity(s: &Scenario, cfg: &SimConfig, opts: &CapacityOptions) -> Result<SimEstimate> {
    s.validate()?;
    let scale = if opts.half_duplex { 0.5 } else { 1.0 };
    let m = run(cfg, |rng| {
        let (a, b) = draw_hops(s, rng);
        scale * a.min(b).ln_1p() / std::f64::consts::LN_2
    })?;
    Ok(SimEstimate {
        value: m.mean,
        stderr: sample_std_error(&m),
        trials: m.n,
    })
}
