//! End-to-end benchmark framework for predict-then-optimize pipelines.
//!
//! The crate is organized around the stages of a decision-focused training
//! run:
//!
//! * [`numerics`]: dense linear algebra and seeded random streams,
//! * [`problems`]: benchmark problem specs, synthetic generators and ingestion,
//! * [`solvers`]: exact combinatorial and convex oracles with deterministic
//!   tie-breaking,
//! * [`predictors`]: linear / one-hidden-layer models with explicit
//!   forward and backward passes,
//! * [`losses`]: prediction-focused MSE plus the decision-focused surrogate
//!   losses and gradients, all producing `dL/dc_hat`,
//! * [`qptl`]: quadratic smoothing of linear programs with implicit
//!   differentiation of the KKT system,
//! * [`train`]: Adam, plateau scheduling, the per-instance training loop,
//!   metrics and grid search.
//!
//! Every component is deterministic given its inputs and an explicit
//! [`numerics::RngStream`], so whole experiments replay bit-identically.

pub mod losses;
pub mod numerics;
pub mod predictors;
pub mod problems;
pub mod qptl;
pub mod solvers;
pub mod train;

pub use numerics::{Matrix, RngStream};
pub use problems::{Dataset, ProblemInstance};
pub use solvers::{Oracle, Solution, SolveStatus};
pub use losses::{LossEval, Method, SolutionCache, StrategyConfig};
pub use train::{RegretReport, TrainConfig};
