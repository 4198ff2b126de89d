//! Measurement-level Monte Carlo of the 6-copy protocol.
//!
//! Bell outcomes are labelled by `a ∈ F₂^{2n}` through
//! `|Φ_a⟩ = (I ⊗ W_a)|Φ⟩`, `|Φ⟩ = 2^{-n/2} Σ_x |x⟩|x⟩`. With this labelling the
//! SWAP eigenvalue on `|Φ_a⟩` is `(-1)^{v·w}` for `a = (v, w)`.
//!
//! One shot of the estimator:
//! 1. two Bell measurements on two fresh pairs `ρ ⊗ ρ`, outcomes `x₁`, `x₂`;
//!    `x = x₁ + x₂` is a Bell-difference sample (4 copies);
//! 2. one Bell measurement on `ρ ⊗ W_x ρ W_x` (2 copies), output `(-1)^{v·w}`.
//!
//! So a shot consumes 6 copies and never holds more than 2 at once.
//!
//! Shots are split into `shards` contiguous blocks; shard `i` draws from the
//! ChaCha8 stream `(seed, i)`. Results are reproducible per `(seed, shards)`;
//! changing the shard count changes the realized stream, not its law.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_n, Error, Result};
use crate::fourier::FourierTable;
use crate::gf2::{low_mask, PauliVector};
use crate::quantum::{p_hat_table, q_table, DensityMatrix};

/// State copies consumed per estimator shot.
pub const COPIES_PER_SHOT: usize = 6;
/// Copies held jointly by any single measurement.
pub const MAX_JOINT_COPIES: usize = 2;

const CLAMP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMode {
    /// Simulate every Bell measurement.
    Measurement,
    /// Draw `x` from `q_ρ` and the ±1 outcome from its exact mean.
    #[default]
    #[serde(alias = "exact")]
    ExactDistribution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub mode: SamplerMode,
    pub seed: u64,
    pub shards: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            mode: SamplerMode::ExactDistribution,
            seed: 0,
            shards: 1,
        }
    }
}

impl SamplerConfig {
    pub fn new(mode: SamplerMode, seed: u64, shards: usize) -> Self {
        Self { mode, seed, shards }
    }

    fn validate(&self) -> Result<()> {
        if self.shards == 0 {
            return Err(Error::InvalidParameter("shards must be positive".into()));
        }
        Ok(())
    }

    fn shard_rng(&self, shard: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(shard as u64);
        rng
    }

    /// `(shard index, first shot, shot count)` for each shard.
    fn plan(&self, shots: usize) -> Vec<(usize, usize, usize)> {
        let base = shots / self.shards;
        let extra = shots % self.shards;
        let mut start = 0;
        (0..self.shards)
            .map(|i| {
                let len = base + usize::from(i < extra);
                let r = (i, start, len);
                start += len;
                r
            })
            .collect()
    }

    fn run<T: Send>(&self, shots: usize, f: impl Fn(&mut ChaCha8Rng, usize) -> T + Sync) -> Vec<T> {
        self.plan(shots)
            .into_par_iter()
            .map(|(i, _, len)| f(&mut self.shard_rng(i), len))
            .collect()
    }
}

/// Inverse-CDF sampler over table indices.
#[derive(Clone, Debug)]
pub(crate) struct Cdf {
    cum: Vec<f64>,
}

impl Cdf {
    pub(crate) fn new(probs: &[f64]) -> Result<Self> {
        let mut total = 0.0;
        let mut cum = Vec::with_capacity(probs.len());
        for &p in probs {
            if p < -CLAMP_TOL || !p.is_finite() {
                return Err(Error::InvalidParameter(format!("invalid probability {p}")));
            }
            total += p.max(0.0);
            cum.push(total);
        }
        if total <= 0.0 {
            return Err(Error::InvalidParameter("distribution has zero mass".into()));
        }
        cum.iter_mut().for_each(|c| *c /= total);
        *cum.last_mut().expect("nonempty") = 1.0;
        Ok(Self { cum })
    }

    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cum
            .partition_point(|&c| c <= u)
            .min(self.cum.len() - 1)
    }
}

/// Bell-basis outcome law for `ρ ⊗ σ`: `P(a) = ⟨Φ_a| ρ⊗σ |Φ_a⟩ = 2^{-n} tr(ρᵀ W_a σ W_a)`.
pub fn bell_probs(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FourierTable> {
    ensure_same_n(rho.n(), sigma.n())?;
    let n = rho.n();
    let dim = rho.dim();
    let (r, s) = (rho.matrix(), sigma.matrix());
    let mut values = vec![0.0; dim * dim];
    let mut t = vec![0.0; dim];
    for a in 0..dim {
        // t[d] = Σ_i ρ[i, i⊕d] σ[i⊕a, i⊕d⊕a]
        for (d, td) in t.iter_mut().enumerate() {
            *td = (0..dim)
                .map(|i| (r[(i, i ^ d)] * s[(i ^ a, i ^ d ^ a)]).re)
                .sum();
        }
        for b in 0..dim {
            let acc: f64 = t
                .iter()
                .enumerate()
                .map(|(d, &v)| if (b & d).count_ones() & 1 == 1 { -v } else { v })
                .sum();
            values[(a << n) | b] = acc / dim as f64;
        }
    }
    for v in values.iter_mut() {
        if *v < 0.0 && *v >= -CLAMP_TOL {
            *v = 0.0;
        }
    }
    FourierTable::new(n, values)
}

/// Per-shard shot machinery; lazily caches SWAP-test outcome laws per `x`.
struct ShotEngine<'a> {
    rho: &'a DensityMatrix,
    mode: SamplerMode,
    pair: Cdf,
    p_hat_scaled: Vec<f64>,
    swap_laws: Vec<Option<Cdf>>,
    bell_measurements: usize,
}

impl<'a> ShotEngine<'a> {
    fn new(rho: &'a DensityMatrix, mode: SamplerMode, shared: &Shared) -> Self {
        Self {
            rho,
            mode,
            pair: shared.pair.clone(),
            p_hat_scaled: shared.p_hat_scaled.clone(),
            swap_laws: vec![None; rho.dim() * rho.dim()],
            bell_measurements: 0,
        }
    }

    fn bell_difference<R: Rng>(&mut self, rng: &mut R) -> usize {
        match self.mode {
            SamplerMode::Measurement => {
                let x1 = self.pair.sample(rng);
                let x2 = self.pair.sample(rng);
                self.bell_measurements += 2;
                x1 ^ x2
            }
            SamplerMode::ExactDistribution => self.pair.sample(rng),
        }
    }

    fn swap_law(&mut self, x: usize) -> Result<&Cdf> {
        if self.swap_laws[x].is_none() {
            let pv = PauliVector::new(self.rho.n(), x as u64)?;
            let sigma = self.rho.conjugated_by(&pv)?;
            self.swap_laws[x] = Some(Cdf::new(bell_probs(self.rho, &sigma)?.values())?);
        }
        Ok(self.swap_laws[x].as_ref().expect("filled above"))
    }

    /// One Bell measurement of `ρ ⊗ W_x ρ W_x`, returning `(-1)^{v·w}`.
    fn swap_outcome_measured<R: Rng>(&mut self, x: usize, rng: &mut R) -> Result<i8> {
        let n = self.rho.n();
        let a = self.swap_law(x)?.sample(rng) as u64;
        self.bell_measurements += 1;
        let (v, w) = (a >> n, a & low_mask(n));
        Ok(if (v & w).count_ones() & 1 == 1 { -1 } else { 1 })
    }

    fn shot<R: Rng>(&mut self, rng: &mut R) -> Result<(usize, i8)> {
        let x = self.bell_difference(rng);
        let outcome = match self.mode {
            SamplerMode::Measurement => self.swap_outcome_measured(x, rng)?,
            SamplerMode::ExactDistribution => {
                let mean = self.p_hat_scaled[x];
                if rng.random::<f64>() < (1.0 + mean) / 2.0 {
                    1
                } else {
                    -1
                }
            }
        };
        Ok((x, outcome))
    }
}

/// Tables shared read-only by all shards.
struct Shared {
    pair: Cdf,
    p_hat_scaled: Vec<f64>,
}

impl Shared {
    fn new(rho: &DensityMatrix, mode: SamplerMode) -> Result<Self> {
        let pair = match mode {
            SamplerMode::Measurement => Cdf::new(bell_probs(rho, rho)?.values())?,
            SamplerMode::ExactDistribution => Cdf::new(q_table(rho).values())?,
        };
        let p_hat_scaled = match mode {
            SamplerMode::Measurement => Vec::new(),
            SamplerMode::ExactDistribution => {
                let d2 = (rho.dim() * rho.dim()) as f64;
                p_hat_table(rho)
                    .values()
                    .iter()
                    .map(|v| (v * d2).clamp(-1.0, 1.0))
                    .collect()
            }
        };
        Ok(Self { pair, p_hat_scaled })
    }
}

/// Bell-difference samples: `x₁ + x₂` from two Bell measurements of `ρ ⊗ ρ`
/// (measurement mode), or direct draws from `q_ρ` (exact mode).
pub fn bell_difference_sample(
    rho: &DensityMatrix,
    cfg: &SamplerConfig,
    count: usize,
) -> Result<Vec<PauliVector>> {
    cfg.validate()?;
    let shared = Shared::new(rho, cfg.mode)?;
    let n = rho.n();
    let parts = cfg.run(count, |rng, len| {
        let mut eng = ShotEngine::new(rho, cfg.mode, &shared);
        (0..len)
            .map(|_| PauliVector::new(n, eng.bell_difference(rng) as u64))
            .collect::<Result<Vec<_>>>()
    });
    Ok(parts.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Ancilla-free SWAP test between `ρ` and `W_x ρ W_x`; each ±1 sample is one
/// Bell measurement. The mean is `tr(ρ W_x ρ W_x) = 4ⁿ p̂_ρ(x)`.
pub fn swap_test_sample(
    rho: &DensityMatrix,
    x: &PauliVector,
    cfg: &SamplerConfig,
    count: usize,
) -> Result<Vec<i8>> {
    cfg.validate()?;
    ensure_same_n(rho.n(), x.n())?;
    let sigma = rho.conjugated_by(x)?;
    let law = Cdf::new(bell_probs(rho, &sigma)?.values())?;
    let n = rho.n();
    let parts = cfg.run(count, |rng, len| {
        (0..len)
            .map(|_| {
                let a = law.sample(rng) as u64;
                if (a >> n & a & low_mask(n)).count_ones() & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect::<Vec<i8>>()
    });
    Ok(parts.concat())
}

/// Mean of a ±1 estimator with its conservative standard error `1/√shots`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaEstimate {
    pub mean: f64,
    pub shots: usize,
    pub std_error: f64,
    /// `(+1 count, -1 count)`.
    pub raw_counts: (usize, usize),
}

impl EtaEstimate {
    pub fn from_counts(plus: usize, minus: usize) -> Result<Self> {
        let shots = plus + minus;
        if shots == 0 {
            return Err(Error::InvalidParameter(
                "at least one shot is required".into(),
            ));
        }
        Ok(Self {
            mean: (plus as f64 - minus as f64) / shots as f64,
            shots,
            std_error: 1.0 / (shots as f64).sqrt(),
            raw_counts: (plus, minus),
        })
    }

    pub fn from_outcomes(outcomes: &[i8]) -> Result<Self> {
        let plus = outcomes.iter().filter(|&&o| o > 0).count();
        Self::from_counts(plus, outcomes.len() - plus)
    }
}

/// Resource accounting for a run of the estimator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProtocolStats {
    pub shots: usize,
    /// Simulated Bell measurements; zero in exact mode.
    pub bell_measurements: usize,
}

impl ProtocolStats {
    pub fn copies_consumed(&self) -> usize {
        self.bell_measurements * MAX_JOINT_COPIES
    }
}

/// One estimator shot: the Bell-difference sample and the SWAP-test outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Shot {
    pub x: PauliVector,
    pub outcome: i8,
}

fn run_eta<T: Send>(
    rho: &DensityMatrix,
    cfg: &SamplerConfig,
    shots: usize,
    per_shard: impl Fn(&mut ShotEngine<'_>, &mut ChaCha8Rng, usize) -> Result<T> + Sync,
) -> Result<Vec<(T, usize)>> {
    cfg.validate()?;
    if shots == 0 {
        return Err(Error::InvalidParameter(
            "at least one shot is required".into(),
        ));
    }
    let shared = Shared::new(rho, cfg.mode)?;
    cfg.run(shots, |rng, len| {
        let mut eng = ShotEngine::new(rho, cfg.mode, &shared);
        let out = per_shard(&mut eng, rng, len)?;
        Ok((out, eng.bell_measurements))
    })
    .into_iter()
    .collect()
}

/// The 6-copy estimator of `η = 4ⁿ Σ p_ρ³`, with resource accounting.
pub fn estimate_eta_with_stats(
    rho: &DensityMatrix,
    cfg: &SamplerConfig,
    shots: usize,
) -> Result<(EtaEstimate, ProtocolStats)> {
    let parts = run_eta(rho, cfg, shots, |eng, rng, len| {
        let mut plus = 0usize;
        for _ in 0..len {
            if eng.shot(rng)?.1 > 0 {
                plus += 1;
            }
        }
        Ok(plus)
    })?;
    let plus: usize = parts.iter().map(|p| p.0).sum();
    let bell: usize = parts.iter().map(|p| p.1).sum();
    Ok((
        EtaEstimate::from_counts(plus, shots - plus)?,
        ProtocolStats {
            shots,
            bell_measurements: bell,
        },
    ))
}

pub fn estimate_eta(rho: &DensityMatrix, cfg: &SamplerConfig, shots: usize) -> Result<EtaEstimate> {
    Ok(estimate_eta_with_stats(rho, cfg, shots)?.0)
}

/// Per-shot record of the same stream [`estimate_eta`] consumes.
pub fn eta_shots(rho: &DensityMatrix, cfg: &SamplerConfig, shots: usize) -> Result<Vec<Shot>> {
    let n = rho.n();
    let parts = run_eta(rho, cfg, shots, |eng, rng, len| {
        (0..len)
            .map(|_| {
                let (x, outcome) = eng.shot(rng)?;
                Ok(Shot {
                    x: PauliVector::new(n, x as u64)?,
                    outcome,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(parts.into_iter().flat_map(|p| p.0).collect())
}

/// Empirical law of `samples` as a table.
pub fn empirical_law(n: usize, samples: &[PauliVector]) -> Result<FourierTable> {
    let mut counts = vec![0.0; 1 << (2 * n)];
    for s in samples {
        ensure_same_n(n, s.n())?;
        counts[s.index()] += 1.0;
    }
    let total = samples.len().max(1) as f64;
    FourierTable::new(n, counts.into_iter().map(|c| c / total).collect())
}

/// Total-variation distance `½ Σ |p - q|`.
pub fn total_variation(p: &FourierTable, q: &FourierTable) -> Result<f64> {
    ensure_same_n(p.n(), q.n())?;
    Ok(0.5
        * p.values()
            .iter()
            .zip(q.values())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

fn word_bits(x: &PauliVector) -> String {
    let n = x.n();
    (0..2 * n)
        .rev()
        .map(|j| if x.word() >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Writes `shot_index,x_bits,outcome`; `x_bits` is the X-part followed by the Z-part.
pub fn write_shots_csv<W: Write>(shots: &[Shot], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["shot_index", "x_bits", "outcome"])?;
    for (i, s) in shots.iter().enumerate() {
        out.write_record([i.to_string(), word_bits(&s.x), s.outcome.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Bell-difference dump: `shot_index,x_bits,outcome` with an empty outcome.
pub fn write_samples_csv<W: Write>(samples: &[PauliVector], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["shot_index", "x_bits", "outcome"])?;
    for (i, s) in samples.iter().enumerate() {
        out.write_record([i.to_string(), word_bits(s), String::new()])?;
    }
    out.flush()?;
    Ok(())
}

/// SWAP-test dump: `shot_index,x_bits,outcome` with the fixed `x`.
pub fn write_outcomes_csv<W: Write>(x: &PauliVector, outcomes: &[i8], w: W) -> Result<()> {
    let shots: Vec<Shot> = outcomes
        .iter()
        .map(|&outcome| Shot { x: *x, outcome })
        .collect();
    write_shots_csv(&shots, w)
}
