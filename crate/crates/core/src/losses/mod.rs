//! Training signals: prediction-focused MSE plus the decision-focused
//! surrogate losses and gradients, every one producing `dL/dc_hat` for the
//! predictor's backward pass.
//!
//! All formulas assume the canonical minimization orientation
//! (`x*(c) = argmin c^T x`); the solvers layer guarantees that orientation.

mod contrastive;
mod perturb;
mod spo;

pub use contrastive::{listwise_loss, map_loss, nce_loss, pairwise_diff_loss, pairwise_loss};
pub use perturb::{dbb_grad, dpo_jacobian, fy_grad, imle_grad, neg_identity_grad};
pub use spo::spo_plus;

use crate::numerics::{dot, scale, sub, RngStream};
use crate::solvers::{Oracle, SolverError};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LossError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("solution cache is empty")]
    EmptyCache,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Numerics(#[from] crate::numerics::NumericsError),
}

/// The training signal selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
pub enum Method {
    /// Prediction-focused MSE baseline.
    Pf,
    Spo,
    Dbb,
    NegIdentity,
    Imle,
    Fy,
    /// Perturbed-optimizer Jacobian; exposed as an operator, not a trainer.
    Dpo,
    Nce,
    Map,
    Pairwise,
    PairwiseDiff,
    Listwise,
    /// Quadratic smoothing with implicit KKT differentiation.
    Qptl,
}

impl Method {
    pub const ALL_TRAINABLE: [Method; 12] = [
        Method::Pf,
        Method::Spo,
        Method::Dbb,
        Method::NegIdentity,
        Method::Imle,
        Method::Fy,
        Method::Qptl,
        Method::Nce,
        Method::Map,
        Method::Pairwise,
        Method::PairwiseDiff,
        Method::Listwise,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Pf => "PF",
            Method::Spo => "SPO",
            Method::Dbb => "DBB",
            Method::NegIdentity => "NegIdentity",
            Method::Imle => "IMLE",
            Method::Fy => "FY",
            Method::Dpo => "DPO",
            Method::Nce => "NCE",
            Method::Map => "MAP",
            Method::Pairwise => "Pairwise",
            Method::PairwiseDiff => "PairwiseDiff",
            Method::Listwise => "Listwise",
            Method::Qptl => "QPTL",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        let lower = s.to_ascii_lowercase();
        Method::ALL_TRAINABLE
            .into_iter()
            .chain([Method::Dpo])
            .find(|m| m.name().to_ascii_lowercase() == lower)
    }

    /// Methods that learn through a solution cache instead of solver calls.
    pub fn uses_cache(&self) -> bool {
        matches!(
            self,
            Method::Nce | Method::Map | Method::Pairwise | Method::PairwiseDiff | Method::Listwise
        )
    }

    /// Methods that need the ground-truth cost vector (not just the
    /// ground-truth solution) during training.
    pub fn needs_true_cost(&self) -> bool {
        matches!(
            self,
            Method::Pf
                | Method::Spo
                | Method::Nce
                | Method::Map
                | Method::Pairwise
                | Method::PairwiseDiff
                | Method::Listwise
        )
    }
}

/// Which surrogate-gradient method to use and all its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub method: Method,
    /// Finite-difference step (DBB, I-MLE).
    #[serde(default)]
    pub delta: Option<f64>,
    /// Perturbation temperature (I-MLE, FY, DPO).
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Sum-of-Gamma hyperparameter (I-MLE).
    #[serde(default)]
    pub kappa: Option<u32>,
    /// Listwise softmax temperature.
    #[serde(default)]
    pub tau: Option<f64>,
    /// Pairwise hinge margin.
    #[serde(default)]
    pub theta: Option<f64>,
    /// Quadratic smoothing weight (QPTL).
    #[serde(default)]
    pub mu: Option<f64>,
    /// Monte-Carlo sample count (FY, DPO).
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    /// Cache growth probability for cache-based methods.
    #[serde(default = "default_p_solve")]
    pub p_solve: f64,
    /// Evaluate NCE/MAP objectives at `(c_hat - c)` instead of `c_hat`.
    #[serde(default)]
    pub cost_gap_variant: bool,
    /// Truncation length of the Sum-of-Gamma construction.
    #[serde(default = "default_sog_terms")]
    pub sum_of_gamma_terms: usize,
}

fn default_mc_samples() -> usize {
    16
}

fn default_p_solve() -> f64 {
    0.05
}

fn default_sog_terms() -> usize {
    crate::numerics::SUM_OF_GAMMA_DEFAULT_TERMS
}

impl StrategyConfig {
    pub fn new(method: Method) -> Self {
        StrategyConfig {
            method,
            delta: None,
            epsilon: None,
            kappa: None,
            tau: None,
            theta: None,
            mu: None,
            mc_samples: default_mc_samples(),
            p_solve: default_p_solve(),
            cost_gap_variant: false,
            sum_of_gamma_terms: 10,
        }
    }

    pub fn with_delta(mut self, v: f64) -> Self {
        self.delta = Some(v);
        self
    }

    pub fn with_epsilon(mut self, v: f64) -> Self {
        self.epsilon = Some(v);
        self
    }

    pub fn with_kappa(mut self, v: u32) -> Self {
        self.kappa = Some(v);
        self
    }

    pub fn with_tau(mut self, v: f64) -> Self {
        self.tau = Some(v);
        self
    }

    pub fn with_theta(mut self, v: f64) -> Self {
        self.theta = Some(v);
        self
    }

    pub fn with_mu(mut self, v: f64) -> Self {
        self.mu = Some(v);
        self
    }

    pub fn with_mc_samples(mut self, v: usize) -> Self {
        self.mc_samples = v;
        self
    }

    pub fn with_p_solve(mut self, v: f64) -> Self {
        self.p_solve = v;
        self
    }

    pub fn with_cost_gap_variant(mut self, v: bool) -> Self {
        self.cost_gap_variant = v;
        self
    }

    /// Validate that every field the method needs is present and in range.
    /// Error messages name the missing key so config errors are actionable.
    pub fn validate(&self) -> Result<(), String> {
        let need = |opt: Option<f64>, key: &str, strictly_positive: bool| -> Result<f64, String> {
            let v = opt.ok_or_else(|| format!("method.{key} is required for {}", self.method.name()))?;
            if strictly_positive && v <= 0.0 {
                return Err(format!("method.{key} must be > 0, got {v}"));
            }
            Ok(v)
        };
        match self.method {
            Method::Pf | Method::NegIdentity => {}
            Method::Spo => {}
            Method::Dbb => {
                need(self.delta, "delta", true)?;
            }
            Method::Imle => {
                need(self.delta, "delta", true)?;
                let eps = need(self.epsilon, "epsilon", false)?;
                if eps < 0.0 {
                    return Err(format!("method.epsilon must be >= 0, got {eps}"));
                }
                let kappa =
                    self.kappa.ok_or_else(|| "method.kappa is required for IMLE".to_string())?;
                if kappa < 1 {
                    return Err(format!("method.kappa must be >= 1, got {kappa}"));
                }
                if self.sum_of_gamma_terms < 1 {
                    return Err("method.sum_of_gamma_terms must be >= 1".into());
                }
            }
            Method::Fy | Method::Dpo => {
                need(self.epsilon, "epsilon", true)?;
                if self.mc_samples < 1 {
                    return Err("method.mc_samples must be >= 1".into());
                }
            }
            Method::Listwise => {
                need(self.tau, "tau", true)?;
            }
            Method::Pairwise => {
                let theta = need(self.theta, "theta", false)?;
                if theta < 0.0 {
                    return Err(format!("method.theta must be >= 0, got {theta}"));
                }
            }
            Method::Nce | Method::Map | Method::PairwiseDiff => {}
            Method::Qptl => {
                need(self.mu, "mu", true)?;
            }
        }
        if self.method.uses_cache() && !(0.0..=1.0).contains(&self.p_solve) {
            return Err(format!("method.p_solve must lie in [0, 1], got {}", self.p_solve));
        }
        Ok(())
    }
}

/// One loss evaluation: value, gradient in `c_hat`, oracle usage.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEval {
    pub loss: f64,
    pub grad_c: Vec<f64>,
    pub solver_calls_used: u64,
}

impl LossEval {
    fn new(loss: f64, grad_c: Vec<f64>, solver_calls_used: u64) -> Self {
        debug_assert!(grad_c.iter().all(|g| g.is_finite()), "gradient must be finite");
        LossEval { loss, grad_c, solver_calls_used }
    }
}

/// A deduplicated pool of feasible solutions used as negatives by the
/// contrastive and ranking losses.
///
/// Holds every ground-truth training solution after [`SolutionCache::seed`],
/// then grows through [`cache_update`]. Entries keep insertion order, which
/// the MAP argmin tie-break relies on.
#[derive(Debug, Clone, Default)]
pub struct SolutionCache {
    entries: Vec<Vec<f64>>,
    seen: HashSet<Vec<u64>>,
    solver_calls: u64,
}

impl SolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Initialize from the ground-truth solutions of a training set.
    pub fn seed<'a>(solutions: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let mut cache = Self::new();
        for s in solutions {
            cache.insert(s.to_vec());
        }
        cache
    }

    /// Insert if not already present (exact vector equality). Returns true
    /// when the solution was new.
    pub fn insert(&mut self, x: Vec<f64>) -> bool {
        let key: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
        if self.seen.insert(key) {
            self.entries.push(x);
            true
        } else {
            false
        }
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Solver calls spent growing this cache.
    pub fn solver_calls(&self) -> u64 {
        self.solver_calls
    }
}

/// Mean squared error over components: `loss = (1/m) sum (c_hat - c)^2`,
/// `grad = (2/m)(c_hat - c)`. Batch averaging is the training loop's job.
pub fn mse_loss(c_hat: &[f64], c: &[f64]) -> Result<LossEval, LossError> {
    if c_hat.len() != c.len() {
        return Err(LossError::DimMismatch(format!(
            "c_hat has {} components, c has {}",
            c_hat.len(),
            c.len()
        )));
    }
    let m = c_hat.len() as f64;
    let diff = sub(c_hat, c);
    let loss = dot(&diff, &diff) / m;
    let grad = scale(2.0 / m, &diff);
    Ok(LossEval::new(loss, grad, 0))
}

/// Grow the cache with probability `p_solve`: solve for the predicted costs
/// and insert the solution if new. Returns whether a solve happened.
pub fn cache_update(
    cache: &mut SolutionCache,
    c_hat: &[f64],
    p_solve: f64,
    rng: &mut RngStream,
    oracle: &dyn Oracle,
) -> Result<bool, LossError> {
    if !(0.0..=1.0).contains(&p_solve) {
        return Err(LossError::InvalidParam(format!("p_solve must lie in [0,1], got {p_solve}")));
    }
    // Draw even when p_solve is 0 or 1 so the stream advances identically
    // across configurations.
    let coin = rng.uniform();
    if coin < p_solve {
        let sol = oracle.solve(c_hat)?;
        cache.solver_calls += 1;
        cache.insert(sol.x);
        Ok(true)
    } else {
        Ok(false)
    }
}
