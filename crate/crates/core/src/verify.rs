//! Named numerical checks of every identity and inequality the tester relies on.
//!
//! Each check runs over `trials` seeded states, cycling through four families
//! (pure Haar, rank 2, full rank, depolarized stabilizer), and, where the claim
//! is stated for general functions, over synthetic tables that satisfy exactly
//! the claim's hypotheses. Subspace-indexed claims are exhaustive over all
//! subspaces for `n ≤ 2` and use random subspaces beyond that.
//!
//! Slack is the margin by which an instance satisfies its claim: `lhs − rhs`
//! for inequalities, `−|a − b| / max(1, |a|, |b|)` for identities, and `0` or
//! `−1` for exact combinatorial facts. An instance fails when its slack is
//! below `−tolerance`.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{
    convolve, coset_sum, inverse_symplectic_transform, plancherel_inner, subspace_sum,
    symplectic_transform, Domain, FourierTable,
};
use crate::gf2::{
    enumerate_all_subspaces, enumerate_lagrangians, isotropic_cover, sp_word,
    symplectic_gram_schmidt, PauliVector, Subspace, SubspaceKind,
};
use crate::quantum::{
    bias_report, gen_state, p_hat_hermitian, p_hat_table, p_table, q_table, weyl_coefficients,
    CMatrix, DensityMatrix, StateKind, MAX_DENSE_QUBITS,
};
use crate::sampling::{estimate_eta, SamplerConfig, SamplerMode};
use crate::stabilizer::{best_on_lagrangian, stabilizer_catalog, stabilizer_fidelity};

/// Tolerance for floating-point identities and inequalities.
pub const FLOAT_TOL: f64 = 1e-10;
/// Largest `n` with exhaustive subspace enumeration inside a check.
pub const EXHAUSTIVE_SUBSPACE_QUBITS: usize = 2;
/// Largest `n` for checks that need brute-force stabilizer fidelity.
pub const BRUTE_FORCE_QUBITS: usize = 3;

const RANDOM_SUBSPACES_PER_TRIAL: usize = 8;
const SAMPLER_SHOTS: usize = 20_000;
const SAMPLER_MAX_QUBITS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub n: usize,
    pub instances: usize,
    pub failures: usize,
    pub worst_slack: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Running slack statistics for one check.
#[derive(Debug)]
struct Tally {
    instances: usize,
    failures: usize,
    worst: f64,
    tol: f64,
}

impl Tally {
    fn record(&mut self, slack: f64) {
        self.instances += 1;
        if slack.is_nan() || slack < -self.tol {
            self.failures += 1;
        }
        self.worst = self.worst.min(if slack.is_nan() {
            f64::NEG_INFINITY
        } else {
            slack
        });
    }

    fn ineq(&mut self, lhs: f64, rhs: f64) {
        self.record(lhs - rhs);
    }

    fn eq(&mut self, a: f64, b: f64) {
        self.record(-(a - b).abs() / 1f64.max(a.abs()).max(b.abs()));
    }

    fn eq_tables(&mut self, a: &FourierTable, b: &FourierTable) -> Result<()> {
        let scale = 1f64.max(a.max_abs()).max(b.max_abs());
        self.record(-a.max_abs_diff(b)? / scale);
        Ok(())
    }

    fn holds(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { -1.0 });
    }
}

struct Ctx {
    n: usize,
    trials: usize,
    rng: ChaCha8Rng,
    t: Tally,
}

impl Ctx {
    fn dim(&self) -> usize {
        1 << self.n
    }

    /// State for trial `i`, cycling pure / rank 2 / full rank / depolarized stabilizer.
    fn family_state(&mut self, i: usize) -> Result<DensityMatrix> {
        let seed = self.rng.random::<u64>();
        let kind = match i % 4 {
            0 => StateKind::PureHaar,
            1 => StateKind::MixedGinibre {
                rank: 2.min(self.dim()),
            },
            2 => StateKind::MixedGinibre { rank: self.dim() },
            _ => StateKind::DepolarizedStabilizer {
                p: self.rng.random(),
                index: None,
            },
        };
        gen_state(&kind, self.n, seed)
    }

    fn states(&mut self) -> Result<Vec<DensityMatrix>> {
        (0..self.trials).map(|i| self.family_state(i)).collect()
    }

    /// Pure states: alternately Haar-random and random stabilizer states.
    fn pure_states(&mut self) -> Result<Vec<DensityMatrix>> {
        (0..self.trials)
            .map(|i| {
                let seed = self.rng.random::<u64>();
                let kind = if i % 2 == 0 {
                    StateKind::PureHaar
                } else {
                    StateKind::DepolarizedStabilizer {
                        p: 0.0,
                        index: None,
                    }
                };
                gen_state(&kind, self.n, seed)
            })
            .collect()
    }

    fn gaussian_table(&mut self) -> FourierTable {
        let n = self.n;
        FourierTable::from_fn(n, |_| self.rng.sample(StandardNormal)).expect("finite")
    }

    /// `0 ≤ f ≤ 2^{-n}` and `Σ f ≤ 1`, with some entries pinned at `2^{-n}`.
    fn bounded_table(&mut self) -> FourierTable {
        let n = self.n;
        let cap = 1.0 / self.dim() as f64;
        let support = self.rng.random_range(1..=self.dim());
        let mut values = vec![0.0; 1 << (2 * n)];
        for _ in 0..support {
            let i = self.rng.random_range(0..values.len());
            values[i] = if self.rng.random_bool(0.3) {
                cap
            } else {
                cap * self.rng.random::<f64>()
            };
        }
        FourierTable::new(n, values).expect("finite")
    }

    /// A table whose transform is a random nonnegative table.
    fn positive_spectrum_table(&mut self) -> FourierTable {
        let n = self.n;
        let mut g = FourierTable::from_fn(n, |_| {
            if self.rng.random_bool(0.3) {
                0.0
            } else {
                self.rng.random::<f64>()
            }
        })
        .expect("finite");
        g.set_domain(Domain::Hat);
        inverse_symplectic_transform(&g)
    }

    fn hermitian(&mut self) -> CMatrix {
        let d = self.dim();
        let g = CMatrix::from_fn(d, d, |_, _| {
            C64::new(
                self.rng.sample(StandardNormal),
                self.rng.sample(StandardNormal),
            )
        });
        (&g + g.adjoint()).scale(0.5)
    }

    fn random_subspace(&mut self) -> Result<Subspace> {
        let dim = self.rng.random_range(0..=2 * self.n);
        Subspace::random(self.n, dim, &mut self.rng)
    }

    /// All subspaces for small `n`, otherwise a fresh random batch.
    fn subspaces(&mut self, all: &Option<Vec<Subspace>>) -> Result<Vec<Subspace>> {
        match all {
            Some(v) => Ok(v.clone()),
            None => (0..RANDOM_SUBSPACES_PER_TRIAL)
                .map(|_| self.random_subspace())
                .collect(),
        }
    }

    fn random_symplectic(&mut self, k: usize) -> Result<Subspace> {
        for _ in 0..10_000 {
            let s = Subspace::random(self.n, 2 * k, &mut self.rng)?;
            if s.is_symplectic() {
                return Ok(s);
            }
        }
        Err(Error::InvalidParameter(format!(
            "no symplectic subspace of dimension {} found",
            2 * k
        )))
    }
}

fn all_subspaces_if_small(n: usize) -> Result<Option<Vec<Subspace>>> {
    if n <= EXHAUSTIVE_SUBSPACE_QUBITS {
        Ok(Some(enumerate_all_subspaces(n)?))
    } else {
        Ok(None)
    }
}

fn cube_sum(t: &FourierTable) -> f64 {
    t.values().iter().map(|v| v * v * v).sum()
}

fn plancherel(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let f = p_table(&rho);
        let g = c.gaussian_table();
        for (a, b) in [(&f, &g), (&f, &f)] {
            let rhs = symplectic_transform(a).dot(&symplectic_transform(b))?;
            c.t.eq(plancherel_inner(a, b)?, rhs);
        }
        let (a, b) = (c.gaussian_table(), c.gaussian_table());
        c.t.eq(
            plancherel_inner(&a, &b)?,
            symplectic_transform(&a).dot(&symplectic_transform(&b))?,
        );
    }
    Ok(())
}

fn convolution_thm(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let pairs = [
            (p_table(&rho), p_hat_table(&rho)),
            (c.gaussian_table(), c.gaussian_table()),
        ];
        for (f, g) in pairs {
            let lhs = symplectic_transform(&convolve(&f, &g)?);
            let rhs = symplectic_transform(&f).pointwise_mul(&symplectic_transform(&g))?;
            c.t.eq_tables(&lhs, &rhs)?;
        }
    }
    Ok(())
}

fn duality(c: &mut Ctx) -> Result<()> {
    let all = all_subspaces_if_small(c.n)?;
    for rho in c.states()? {
        let g = c.gaussian_table();
        for f in [p_table(&rho), g] {
            let fh = symplectic_transform(&f);
            for t in c.subspaces(&all)? {
                let rhs = t.cardinality() as f64 * subspace_sum(&fh, &t.symplectic_complement())?;
                c.t.eq(subspace_sum(&f, &t)?, rhs);
            }
        }
    }
    Ok(())
}

fn double_hat(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let g = c.gaussian_table();
        for f in [p_table(&rho), g] {
            let scale = 1.0 / f.len() as f64;
            c.t.eq_tables(
                &symplectic_transform(&symplectic_transform(&f)),
                &f.scaled(scale),
            )?;
        }
    }
    Ok(())
}

fn p_of_hermitian(h: &CMatrix) -> FourierTable {
    let d = h.nrows();
    let n = d.trailing_zeros() as usize;
    let values = weyl_coefficients(h)
        .iter()
        .map(|z| z.re * z.re / d as f64)
        .collect();
    FourierTable::new(n, values).expect("finite")
}

fn p_hat_formula(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let h = c.hermitian();
        for m in [rho.matrix().clone(), h] {
            c.t.eq_tables(
                &p_hat_hermitian(&m),
                &symplectic_transform(&p_of_hermitian(&m)),
            )?;
        }
    }
    Ok(())
}

fn p_hat_range_sum(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let ph = p_hat_table(&rho);
        let d = rho.dim() as f64;
        let min = ph.values().iter().copied().fold(f64::INFINITY, f64::min);
        let max = ph
            .values()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        c.t.ineq(min, 0.0);
        c.t.ineq(1.0 / (d * d), max);
        c.t.eq(d * ph.sum(), 1.0);
    }
    Ok(())
}

fn q_hat(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let d2 = (rho.dim() * rho.dim()) as f64;
        let coeffs = weyl_coefficients(rho.matrix());
        let want = FourierTable::new(rho.n(), coeffs.iter().map(|z| z.re.powi(4) / d2).collect())?;
        let qh = symplectic_transform(&q_table(&rho));
        c.t.eq_tables(&qh, &want)?;
        c.t.eq_tables(&qh, &p_table(&rho).map(|v| v * v))?;
    }
    Ok(())
}

fn new_test_identity(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let lhs = q_table(&rho).dot(&p_hat_table(&rho))?;
        c.t.eq(lhs, cube_sum(&p_table(&rho)));
    }
    Ok(())
}

fn pure_state_collapse(c: &mut Ctx) -> Result<()> {
    for rho in c.pure_states()? {
        let p = p_table(&rho);
        c.t.eq_tables(&p_hat_table(&rho), &p.scaled(1.0 / rho.dim() as f64))?;
    }
    Ok(())
}

fn gnw_equals_eta_on_pure(c: &mut Ctx) -> Result<()> {
    for rho in c.pure_states()? {
        let b = bias_report(&rho);
        c.t.eq(b.eta_gnw, b.eta);
    }
    Ok(())
}

fn eta_prime_sandwich(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let b = bias_report(&rho);
        c.t.ineq(b.eta, b.eta_prime);
        c.t.ineq(b.eta_prime, b.eta * b.eta);
    }
    Ok(())
}

fn p_lower(c: &mut Ctx) -> Result<()> {
    let cat = stabilizer_catalog(c.n)?;
    let supports: Vec<Vec<usize>> = cat
        .states()
        .iter()
        .map(|s| {
            s.lagrangian()
                .elements()
                .iter()
                .map(|x| x.index())
                .collect()
        })
        .collect();
    for rho in c.states()? {
        let p = p_table(&rho);
        for (overlap, support) in cat.overlaps(&rho)?.iter().zip(&supports) {
            let mass: f64 = support.iter().map(|&i| p.at(i)).sum();
            c.t.ineq(mass, overlap * overlap);
        }
    }
    Ok(())
}

fn eta_lower(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let (f, _) = stabilizer_fidelity(&rho)?;
        c.t.ineq(bias_report(&rho).eta, f.powi(6));
    }
    Ok(())
}

fn fidelity_lower(c: &mut Ctx) -> Result<()> {
    let lagrangians = enumerate_lagrangians(c.n)?;
    let d = c.dim() as f64;
    for rho in c.states()? {
        let (f, _) = stabilizer_fidelity(&rho)?;
        let (p, ph) = (p_table(&rho), p_hat_table(&rho));
        for l in &lagrangians {
            let (best, _) = best_on_lagrangian(&rho, l)?;
            c.t.ineq(best, subspace_sum(&p, l)?);
            c.t.ineq(f, d * subspace_sum(&ph, l)?);
        }
    }
    Ok(())
}

fn linearity(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let ph = p_hat_table(&rho);
        let v = ph.values();
        let triple: f64 = (0..v.len())
            .map(|x| v[x] * (0..v.len()).map(|y| v[y] * v[x ^ y]).sum::<f64>())
            .sum();
        let d2 = (rho.dim() * rho.dim()) as f64;
        c.t.eq(d2 * d2 * triple, bias_report(&rho).eta);
    }
    Ok(())
}

/// `γ = 2ⁿ Σ_{x,y} f(x) f(y) f(x+y)`, `M = {x : 2ⁿ f(x) ≥ γ/4}`; claims
/// `Σ_M f ≥ 3γ/(4 − γ)` and `|M| ≥ (3/4) γ 2ⁿ`.
fn many_large_check(t: &mut Tally, f: &FourierTable) {
    let v = f.values();
    let d = (1usize << f.n()) as f64;
    let gamma = d
        * (0..v.len())
            .map(|x| v[x] * (0..v.len()).map(|y| v[y] * v[x ^ y]).sum::<f64>())
            .sum::<f64>();
    let in_m: Vec<f64> = v
        .iter()
        .copied()
        .filter(|&x| d * x >= gamma / 4.0)
        .collect();
    t.ineq(in_m.iter().sum(), 3.0 * gamma / (4.0 - gamma));
    t.ineq(in_m.len() as f64, 0.75 * gamma * d);
}

fn many_large_p_hat(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let f = p_hat_table(&rho).scaled(rho.dim() as f64);
        many_large_check(&mut c.t, &f);
        let g = c.bounded_table();
        many_large_check(&mut c.t, &g);
    }
    Ok(())
}

fn proper_subspace_mass(c: &mut Ctx) -> Result<()> {
    let all = all_subspaces_if_small(c.n)?;
    let n = c.n;
    for rho in c.states()? {
        let synthetic = c.positive_spectrum_table();
        for f in [p_table(&rho), p_hat_table(&rho), synthetic] {
            for v in c.subspaces(&all)? {
                let own = subspace_sum(&f, &v)?;
                let zs: Vec<PauliVector> = if all.is_some() {
                    PauliVector::all(n).collect()
                } else {
                    (0..RANDOM_SUBSPACES_PER_TRIAL)
                        .map(|_| PauliVector::random(n, &mut c.rng))
                        .collect()
                };
                for z in zs {
                    c.t.ineq(own, coset_sum(&f, &v, &z)?);
                }
            }
        }
    }
    Ok(())
}

fn symplectic_subspaces(c: &mut Ctx, all: &Option<Vec<Subspace>>) -> Result<Vec<Subspace>> {
    match all {
        Some(v) => Ok(v.iter().filter(|s| s.is_symplectic()).cloned().collect()),
        None => {
            let n = c.n;
            (0..RANDOM_SUBSPACES_PER_TRIAL)
                .map(|_| {
                    let k = c.rng.random_range(0..=n);
                    c.random_symplectic(k)
                })
                .collect()
        }
    }
}

fn symplectic_upper_hat(c: &mut Ctx) -> Result<()> {
    let all = all_subspaces_if_small(c.n)?;
    let d2 = (c.dim() * c.dim()) as f64;
    for rho in c.states()? {
        let ph = p_hat_table(&rho);
        for a in symplectic_subspaces(c, &all)? {
            c.t.ineq((a.cardinality() as f64).sqrt(), d2 * subspace_sum(&ph, &a)?);
        }
    }
    Ok(())
}

fn symplectic_upper_p(c: &mut Ctx) -> Result<()> {
    let all = all_subspaces_if_small(c.n)?;
    let d = c.dim() as f64;
    for rho in c.states()? {
        let p = p_table(&rho);
        for a in symplectic_subspaces(c, &all)? {
            c.t.ineq((a.cardinality() as f64).sqrt(), d * subspace_sum(&p, &a)?);
        }
    }
    Ok(())
}

fn cover_is_valid(s: &Subspace) -> Result<bool> {
    let k = s.dim() / 2;
    let cover = isotropic_cover(s)?;
    let mut ok = cover.len() == (1 << k) + 1;
    for (i, t) in cover.iter().enumerate() {
        ok &= t.is_isotropic() && t.dim() == k && t.is_subspace_of(s);
        for u in &cover[i + 1..] {
            ok &= t.meets_trivially(u)?;
        }
    }
    Ok(ok)
}

fn mub_cover(c: &mut Ctx) -> Result<()> {
    if let Some(all) = all_subspaces_if_small(c.n)? {
        for s in all
            .iter()
            .filter(|s| s.dim() > 0 && s.classify() == SubspaceKind::Symplectic)
        {
            c.t.holds(cover_is_valid(s)?);
        }
    }
    let kmax = c.n.min(2);
    for _ in 0..c.trials {
        let k = c.rng.random_range(1..=kmax);
        let s = c.random_symplectic(k)?;
        c.t.holds(cover_is_valid(&s)?);
    }
    Ok(())
}

fn gram_schmidt(c: &mut Ctx) -> Result<()> {
    let n = c.n;
    for _ in 0..c.trials {
        let v = c.random_subspace()?;
        let gs = symplectic_gram_schmidt(&v);
        let sym = gs.symplectic_part(n);
        let central = gs.central_part(n);
        let perp = v.symplectic_complement();
        // dim(V ∩ V^⊥) = dim V + dim V^⊥ − dim(V + V^⊥)
        let radical_dim = v.dim() + perp.dim() - v.join(&perp)?.dim();
        c.t.holds(
            gs.relations_hold()
                && sym.join(&central)? == v
                && central.is_subspace_of(&perp)
                && central.dim() == radical_dim
                && sym.dim() == 2 * gs.rank(),
        );
    }
    Ok(())
}

/// `M = {x : 2ⁿ f(x) > 1/2}`, `Σ_M f ≥ (4γ − 1)/3` with `γ = 4ⁿ Σ f³`.
fn mass_in_m_check(t: &mut Tally, f: &FourierTable) {
    let d = (1usize << f.n()) as f64;
    let gamma = d * d * cube_sum(f);
    let mass: f64 = f.values().iter().filter(|&&x| d * x > 0.5).sum();
    t.ineq(mass, (4.0 * gamma - 1.0) / 3.0);
}

fn mass_in_m(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        mass_in_m_check(&mut c.t, &p_table(&rho));
        let g = c.bounded_table();
        mass_in_m_check(&mut c.t, &g);
    }
    Ok(())
}

fn m_commute(c: &mut Ctx) -> Result<()> {
    let n = c.n;
    for rho in c.states()? {
        let p = p_table(&rho);
        let d = rho.dim() as f64;
        let m: Vec<u64> = (0..p.len() as u64)
            .filter(|&x| d * p.at(x as usize) > 0.5)
            .collect();
        c.t.holds(m.iter().all(|&x| m.iter().all(|&y| sp_word(n, x, y) == 0)));
    }
    Ok(())
}

/// On states with `η > 1/4`: `F ≥ (4η − 1)/3`. Draws until `trials` such states are seen.
fn close_regime(c: &mut Ctx) -> Result<()> {
    let mut seen = 0;
    let mut attempts = 0;
    while seen < c.trials {
        attempts += 1;
        if attempts > 100 * c.trials.max(1) {
            return Err(Error::InvalidParameter(
                "too few states with eta > 1/4".into(),
            ));
        }
        let seed = c.rng.random::<u64>();
        let kind = match attempts % 3 {
            0 => StateKind::PureHaar,
            1 => StateKind::DepolarizedStabilizer {
                p: c.rng.random_range(0.0..0.7),
                index: None,
            },
            _ => StateKind::MixedGinibre {
                rank: 2.min(c.dim()),
            },
        };
        let rho = gen_state(&kind, c.n, seed)?;
        let eta = bias_report(&rho).eta;
        if eta <= 0.25 {
            continue;
        }
        seen += 1;
        let (f, _) = stabilizer_fidelity(&rho)?;
        c.t.ineq(f, (4.0 * eta - 1.0) / 3.0);
    }
    Ok(())
}

fn sampler_vs_exact(c: &mut Ctx) -> Result<()> {
    for rho in c.states()? {
        let cfg = SamplerConfig::new(SamplerMode::Measurement, c.rng.random(), 1);
        let est = estimate_eta(&rho, &cfg, SAMPLER_SHOTS)?;
        let eta = bias_report(&rho).eta;
        c.t.ineq(4.0 * est.std_error, (est.mean - eta).abs());
    }
    Ok(())
}

/// A registered check.
pub struct Check {
    pub name: &'static str,
    /// What is being verified.
    pub claim: &'static str,
    pub max_n: usize,
    pub tolerance: f64,
    run: fn(&mut Ctx) -> Result<()>,
}

macro_rules! check {
    ($name:literal, $f:ident, $max_n:expr, $tol:expr, $claim:literal) => {
        Check {
            name: $name,
            claim: $claim,
            max_n: $max_n,
            tolerance: $tol,
            run: $f,
        }
    };
}

const D: usize = MAX_DENSE_QUBITS;
const B: usize = BRUTE_FORCE_QUBITS;

pub static REGISTRY: [Check; 25] = [
    check!("plancherel", plancherel, D, FLOAT_TOL, "4^-n Σ f g = Σ f̂ ĝ"),
    check!(
        "convolution_thm",
        convolution_thm,
        D,
        FLOAT_TOL,
        "(f∗g)^ = f̂ ĝ"
    ),
    check!("duality", duality, D, FLOAT_TOL, "Σ_T f = |T| Σ_{T⊥} f̂"),
    check!("double_hat", double_hat, D, FLOAT_TOL, "f̂̂ = f / 4^n"),
    check!(
        "p_hat_formula",
        p_hat_formula,
        D,
        FLOAT_TOL,
        "4^-n tr(W H W H) is the transform of p_H"
    ),
    check!(
        "p_hat_range_sum",
        p_hat_range_sum,
        D,
        FLOAT_TOL,
        "0 ≤ p̂ ≤ 4^-n and 2^n Σ p̂ = 1"
    ),
    check!(
        "q_hat",
        q_hat,
        D,
        FLOAT_TOL,
        "q̂(x) = tr⁴(W_x ρ)/4^n = p(x)²"
    ),
    check!(
        "new_test_identity",
        new_test_identity,
        D,
        FLOAT_TOL,
        "Σ q p̂ = Σ p³"
    ),
    check!(
        "pure_state_collapse",
        pure_state_collapse,
        D,
        FLOAT_TOL,
        "p̂ = p / 2^n for pure states"
    ),
    check!(
        "gnw_equals_eta_on_pure",
        gnw_equals_eta_on_pure,
        D,
        FLOAT_TOL,
        "η_GNW = η for pure states"
    ),
    check!(
        "eta_prime_sandwich",
        eta_prime_sandwich,
        D,
        FLOAT_TOL,
        "η ≥ η' ≥ η²"
    ),
    check!(
        "p_lower",
        p_lower,
        B,
        FLOAT_TOL,
        "Σ_{Weyl(φ)} p ≥ ⟨φ|ρ|φ⟩² for every stabilizer φ"
    ),
    check!("eta_lower", eta_lower, B, FLOAT_TOL, "η ≥ F⁶"),
    check!(
        "fidelity_lower",
        fidelity_lower,
        B,
        FLOAT_TOL,
        "F ≥ max_φ ⟨φ|ρ|φ⟩ ≥ Σ_L p = 2^n Σ_L p̂ for Lagrangian L"
    ),
    check!(
        "linearity",
        linearity,
        D,
        FLOAT_TOL,
        "16^n Σ_{x,y} p̂(x) p̂(y) p̂(x+y) = 4^n Σ p³"
    ),
    check!(
        "many_large_p_hat",
        many_large_p_hat,
        D,
        FLOAT_TOL,
        "|{2^n f ≥ γ/4}| ≥ (3/4) γ 2^n"
    ),
    check!(
        "proper_subspace_mass",
        proper_subspace_mass,
        D,
        FLOAT_TOL,
        "f̂ ≥ 0 ⇒ Σ_V f ≥ Σ_V f(· + z)"
    ),
    check!(
        "symplectic_upper_hat",
        symplectic_upper_hat,
        D,
        FLOAT_TOL,
        "4^n Σ_A p̂ ≤ √|A| for symplectic A"
    ),
    check!(
        "symplectic_upper_p",
        symplectic_upper_p,
        D,
        FLOAT_TOL,
        "2^n Σ_A p ≤ √|A| for symplectic A"
    ),
    check!(
        "mub_cover",
        mub_cover,
        D,
        0.0,
        "dim-2k symplectic S is covered by 2^k + 1 isotropic k-subspaces"
    ),
    check!(
        "gram_schmidt",
        gram_schmidt,
        D,
        0.0,
        "[x_i, z_j] = δ_ij and V = hyperbolic part ⊕ radical"
    ),
    check!(
        "mass_in_M",
        mass_in_m,
        D,
        FLOAT_TOL,
        "Σ_{2^n f > 1/2} f ≥ (4γ − 1)/3"
    ),
    check!(
        "m_commute",
        m_commute,
        D,
        0.0,
        "{x : 2^n p(x) > 1/2} pairwise commutes"
    ),
    check!(
        "close_regime",
        close_regime,
        B,
        FLOAT_TOL,
        "η > 1/4 ⇒ F ≥ (4η − 1)/3"
    ),
    check!(
        "sampler_vs_exact",
        sampler_vs_exact,
        SAMPLER_MAX_QUBITS,
        0.0,
        "6-copy estimator within 4σ of η"
    ),
];

/// The checks that are exact or floating identities.
pub const IDENTITY_CHECKS: [&str; 12] = [
    "plancherel",
    "convolution_thm",
    "duality",
    "double_hat",
    "p_hat_formula",
    "p_hat_range_sum",
    "q_hat",
    "new_test_identity",
    "linearity",
    "pure_state_collapse",
    "gnw_equals_eta_on_pure",
    "eta_prime_sandwich",
];

/// The chain of inequalities behind soundness.
pub const SOUNDNESS_CHECKS: [&str; 8] = [
    "fidelity_lower",
    "proper_subspace_mass",
    "symplectic_upper_hat",
    "symplectic_upper_p",
    "many_large_p_hat",
    "mass_in_M",
    "m_commute",
    "close_regime",
];

pub fn find_check(name: &str) -> Result<&'static Check> {
    REGISTRY
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

pub fn check_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|c| c.name)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn run_check(name: &str, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let check = find_check(name)?;
    if n == 0 || n > check.max_n {
        return Err(Error::TooLarge {
            n,
            reason: "outside this check's qubit range",
        });
    }
    let mut ctx = Ctx {
        n,
        trials,
        rng: ChaCha8Rng::seed_from_u64(seed ^ fnv1a(name)),
        t: Tally {
            instances: 0,
            failures: 0,
            worst: f64::INFINITY,
            tol: check.tolerance,
        },
    };
    (check.run)(&mut ctx)?;
    let t = ctx.t;
    Ok(CheckReport {
        check_name: name.to_string(),
        n,
        instances: t.instances,
        failures: t.failures,
        worst_slack: if t.instances == 0 { 0.0 } else { t.worst },
        tolerance: check.tolerance,
        seed,
    })
}

/// Resolves a suite: `all`, `identities`, `soundness`, or comma-separated names.
///
/// `all` skips checks whose qubit range excludes `n`; explicit names do not.
pub fn resolve_suite(suite: &str, n: usize) -> Result<Vec<&'static str>> {
    match suite {
        "all" => Ok(REGISTRY
            .iter()
            .filter(|c| n <= c.max_n)
            .map(|c| c.name)
            .collect()),
        "identities" => Ok(IDENTITY_CHECKS.to_vec()),
        "soundness" => Ok(SOUNDNESS_CHECKS.to_vec()),
        list => list
            .split(',')
            .map(|s| find_check(s.trim()).map(|c| c.name))
            .collect(),
    }
}

/// Runs checks concurrently; output order follows `names`.
pub fn run_suite(names: &[&str], n: usize, trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    names
        .par_iter()
        .map(|name| run_check(name, n, trials, seed))
        .collect()
}
