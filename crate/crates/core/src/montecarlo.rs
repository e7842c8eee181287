//! Monte Carlo ensemble averages over Gaussian phase realizations.
//!
//! Samples are split over a fixed number of shards. Each shard owns a
//! ChaCha stream derived from `(seed, shard index)` and accumulates running
//! moments; shards are merged pairwise in index order, so results depend
//! only on the seed and the sample count, never on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channels::{c_vector, phase_unitary_diagonal, GaussianFieldSpec};
use crate::error::{Error, Result};
use crate::measures::TwoQubitState;
use crate::qmath::{CMat4, C64, ONE, ZERO};

/// Number of independent RNG streams a run is split into.
pub const SHARDS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MCConfig {
    pub samples: usize,
    pub seed: u64,
    /// Pair every draw `Ω` with its mirror `2μ − Ω`.
    pub antithetic: bool,
}

impl MCConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        Ok(Self {
            samples,
            seed,
            antithetic: false,
        })
    }

    pub fn with_antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }

    fn shard_sizes(&self) -> Vec<usize> {
        let n = SHARDS as usize;
        (0..n)
            .map(|i| self.samples / n + usize::from(i < self.samples % n))
            .collect()
    }
}

/// Draws `Ω = μ + Lξ` with `L Lᵀ = Σ`.
#[derive(Clone, Copy, Debug)]
pub struct PhaseSampler {
    mean: [f64; 3],
    factor: [[f64; 3]; 3],
}

impl PhaseSampler {
    pub fn new(spec: &GaussianFieldSpec) -> Result<Self> {
        Ok(Self {
            mean: spec.mean(),
            factor: spec.factor()?,
        })
    }

    fn offset<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let xi: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        std::array::from_fn(|i| (0..3).map(|k| self.factor[i][k] * xi[k]).sum())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let d = self.offset(rng);
        std::array::from_fn(|i| self.mean[i] + d[i])
    }

    /// `(μ + Lξ, μ − Lξ)` from a single draw of `ξ`.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> ([f64; 3], [f64; 3]) {
        let d = self.offset(rng);
        (
            std::array::from_fn(|i| self.mean[i] + d[i]),
            std::array::from_fn(|i| self.mean[i] - d[i]),
        )
    }
}

pub fn sample_phase_vector<R: Rng + ?Sized>(
    spec: &GaussianFieldSpec,
    rng: &mut R,
) -> Result<[f64; 3]> {
    Ok(PhaseSampler::new(spec)?.sample(rng))
}

/// Diagonal unitary whose conjugation multiplies `ρ_mn` by `exp(i c^{mn}·Ω)`.
pub fn unitary_from_phases(omega: &[f64; 3]) -> CMat4 {
    CMat4::from_diag(phase_unitary_diagonal(omega))
}

/// Running entrywise mean and sum of squared deviations.
#[derive(Clone, Copy, Debug)]
struct Moments {
    n: u64,
    mean: CMat4,
    m2: [[f64; 4]; 4],
}

impl Moments {
    fn empty() -> Self {
        Self {
            n: 0,
            mean: CMat4::zeros(),
            m2: [[0.0; 4]; 4],
        }
    }

    fn push(&mut self, x: &CMat4) {
        self.n += 1;
        let k = self.n as f64;
        for i in 0..4 {
            for j in 0..4 {
                let delta = x[(i, j)] - self.mean[(i, j)];
                self.mean[(i, j)] += delta / k;
                let delta2 = x[(i, j)] - self.mean[(i, j)];
                self.m2[i][j] += delta.re * delta2.re + delta.im * delta2.im;
            }
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let (na, nb, nf) = (a.n as f64, b.n as f64, n as f64);
        let mut out = Self {
            n,
            mean: CMat4::zeros(),
            m2: [[0.0; 4]; 4],
        };
        for i in 0..4 {
            for j in 0..4 {
                let delta = b.mean[(i, j)] - a.mean[(i, j)];
                out.mean[(i, j)] = a.mean[(i, j)] + delta * (nb / nf);
                out.m2[i][j] = a.m2[i][j] + b.m2[i][j] + delta.norm_sqr() * na * nb / nf;
            }
        }
        out
    }

    /// Standard error of each entry's mean.
    fn stderr(&self) -> [[f64; 4]; 4] {
        if self.n < 2 {
            return [[f64::INFINITY; 4]; 4];
        }
        let n = self.n as f64;
        self.m2.map(|row| row.map(|m2| (m2 / (n - 1.0) / n).sqrt()))
    }
}

fn merge_pairwise(mut parts: Vec<Moments>) -> Moments {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| {
                if c.len() == 2 {
                    Moments::merge(c[0], c[1])
                } else {
                    c[0]
                }
            })
            .collect();
    }
    parts.pop().unwrap_or_else(Moments::empty)
}

/// Sharded, seeded average of `observe(Ω)`.
fn average<F>(spec: &GaussianFieldSpec, cfg: &MCConfig, observe: F) -> Result<Moments>
where
    F: Fn(&[f64; 3]) -> CMat4 + Sync,
{
    let sampler = PhaseSampler::new(spec)?;
    let sizes = cfg.shard_sizes();
    let parts: Vec<Moments> = sizes
        .par_iter()
        .enumerate()
        .map(|(shard, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(shard as u64);
            let mut acc = Moments::empty();
            for _ in 0..count {
                if cfg.antithetic {
                    let (a, b) = sampler.sample_pair(&mut rng);
                    let (xa, xb) = (observe(&a), observe(&b));
                    acc.push(&(xa + xb).scale(C64::new(0.5, 0.0)));
                } else {
                    acc.push(&observe(&sampler.sample(&mut rng)));
                }
            }
            acc
        })
        .collect();
    Ok(merge_pairwise(parts))
}

/// Monte Carlo estimate of a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub rho: CMat4,
    /// Largest entrywise standard error.
    pub stderr: f64,
    pub entry_stderr: [[f64; 4]; 4],
}

/// `⟨⟨U(Ω) ρ U(Ω)†⟩⟩` over Gaussian `Ω`.
pub fn ensemble_average(
    spec: &GaussianFieldSpec,
    rho: &TwoQubitState,
    cfg: &MCConfig,
) -> Result<MCEstimate> {
    let r = *rho.matrix();
    let moments = average(spec, cfg, |omega| {
        r.conjugate_by_diagonal(&phase_unitary_diagonal(omega))
    })?;
    let entry_stderr = moments.stderr();
    Ok(MCEstimate {
        rho: moments.mean,
        stderr: entry_stderr.iter().flatten().copied().fold(0.0, f64::max),
        entry_stderr,
    })
}

/// Monte Carlo estimate of the damping matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelEstimate {
    pub d: CMat4,
    pub entry_stderr: [[f64; 4]; 4],
}

/// Entrywise mean of `exp(i c^{mn}·Ω)`. Only `m < n` is sampled; the lower
/// triangle is the conjugate of the same draws and the diagonal is one.
pub fn channel_estimate(spec: &GaussianFieldSpec, cfg: &MCConfig) -> Result<ChannelEstimate> {
    let moments = average(spec, cfg, |omega| {
        let mut x = CMat4::zeros();
        for m in 0..4 {
            for n in m + 1..4 {
                let c = c_vector(m, n);
                let phase = c[0] * omega[0] + c[1] * omega[1] + c[2] * omega[2];
                x[(m, n)] = C64::from_polar(1.0, phase);
            }
        }
        x
    })?;
    let se = moments.stderr();
    let mut d = CMat4::zeros();
    let mut entry_stderr = [[0.0; 4]; 4];
    for m in 0..4 {
        d[(m, m)] = ONE;
        for n in m + 1..4 {
            d[(m, n)] = moments.mean[(m, n)];
            d[(n, m)] = moments.mean[(m, n)].conj();
            entry_stderr[m][n] = se[m][n];
            entry_stderr[n][m] = se[m][n];
        }
    }
    debug_assert!(d.diag().iter().all(|z| *z != ZERO));
    Ok(ChannelEstimate { d, entry_stderr })
}
