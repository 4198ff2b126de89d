//! Tolerant stabilizer testing: decide `F(ρ) ≥ ε₁` versus `F(ρ) ≤ ε₂` by
//! thresholding the η estimator.
//!
//! Completeness: `η ≥ F⁶`, so close states have `η ≥ ε₁⁶`.
//! Soundness (close regime): whenever `η > 1/4`, `F ≥ (4η − 1)/3`; hence
//! `F ≤ ε₂` forces `η ≤ (3ε₂ + 1)/4`.
//!
//! The general-regime soundness bound carries constants (`Ω(γ^{1089})`) that
//! make any numeric threshold vacuous, so it is not offered as a plan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::sampling::{estimate_eta, EtaEstimate, SamplerConfig};

/// Default failure probability (success probability 2/3).
pub const DEFAULT_DELTA: f64 = 1.0 / 3.0;

/// Refuse plans needing more shots than this.
pub const MAX_SHOTS: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoundnessMode {
    /// `eta_low = (3ε₂ + 1)/4`.
    CloseRegime,
    /// A caller-supplied upper bound on η for far states.
    Custom(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestPlan {
    pub eps1: f64,
    pub eps2: f64,
    pub delta: f64,
    pub eta_low: f64,
    pub eta_high: f64,
    pub threshold: f64,
    pub shots: usize,
}

impl TestPlan {
    /// Half-gap `t = (eta_high − eta_low)/2`.
    pub fn margin(&self) -> f64 {
        (self.eta_high - self.eta_low) / 2.0
    }

    /// Two-sided Hoeffding failure bound `2·exp(−shots·t²/2)`.
    pub fn failure_bound(&self) -> f64 {
        let t = self.margin();
        2.0 * (-(self.shots as f64) * t * t / 2.0).exp()
    }
}

/// Largest `ε₂` for which the close-regime plan at `ε₁` is feasible.
pub fn feasibility_edge(eps1: f64) -> f64 {
    (4.0 * eps1.powi(6) - 1.0) / 3.0
}

/// Hoeffding shot count for distinguishing means `2t` apart with error `delta`.
pub fn hoeffding_shots(t: f64, delta: f64) -> f64 {
    (2.0 * (2.0 / delta).ln() / (t * t)).ceil()
}

pub fn plan_test(eps1: f64, eps2: f64, delta: f64, soundness: SoundnessMode) -> Result<TestPlan> {
    if !(0.0..=1.0).contains(&eps1) || !(0.0..=1.0).contains(&eps2) || eps2 >= eps1 {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= eps2 < eps1 <= 1, got eps1 = {eps1}, eps2 = {eps2}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} outside (0, 1)"
        )));
    }
    let eta_low = match soundness {
        SoundnessMode::CloseRegime => (3.0 * eps2 + 1.0) / 4.0,
        SoundnessMode::Custom(v) if v.is_finite() => v,
        SoundnessMode::Custom(v) => return Err(Error::InvalidParameter(format!("eta_low = {v}"))),
    };
    let eta_high = eps1.powi(6);
    if eta_high <= eta_low {
        return Err(Error::GapInfeasible { eta_high, eta_low });
    }
    let t = (eta_high - eta_low) / 2.0;
    let shots = hoeffding_shots(t, delta);
    if shots > MAX_SHOTS {
        return Err(Error::InvalidParameter(format!(
            "gap {:.3e} needs {shots:.3e} shots",
            2.0 * t
        )));
    }
    Ok(TestPlan {
        eps1,
        eps2,
        delta,
        eta_low,
        eta_high,
        threshold: (eta_low + eta_high) / 2.0,
        shots: shots as usize,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Close,
    Far,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub estimate: EtaEstimate,
    pub plan: TestPlan,
}

pub fn decide(estimate: EtaEstimate, plan: TestPlan) -> Verdict {
    let decision = if estimate.mean >= plan.threshold {
        Decision::Close
    } else {
        Decision::Far
    };
    Verdict {
        decision,
        estimate,
        plan,
    }
}

pub fn tolerant_test(rho: &DensityMatrix, plan: &TestPlan, cfg: &SamplerConfig) -> Result<Verdict> {
    if plan.shots == 0
        || plan.eta_high.partial_cmp(&plan.eta_low) != Some(std::cmp::Ordering::Greater)
    {
        return Err(Error::InvalidParameter("plan is not valid".into()));
    }
    Ok(decide(estimate_eta(rho, cfg, plan.shots)?, *plan))
}
