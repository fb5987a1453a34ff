//! Exact optimization oracles with deterministic tie-breaking.
//!
//! Specialized combinatorial algorithms (grid shortest path, knapsack DP,
//! top-k selection) sit next to a general two-phase simplex plus
//! branch-and-bound stack and a barrier method for the portfolio problem.
//! Everything is deterministic: identical cost vectors produce bitwise
//! identical solutions, which keeps training runs replayable.

mod branch_bound;
mod grid_path;
mod knapsack;
mod lp;
mod milp_builders;
mod oracles;
mod portfolio;
mod simplex;
mod topk;

pub use branch_bound::{branch_and_bound, branch_and_bound_with_stats, BnbLimits, BnbStats};
pub use grid_path::solve_grid_shortest_path;
pub use knapsack::solve_knapsack;
pub use lp::{LinearProgram, MilpModel, RowKind, Sense};
pub use milp_builders::{build_matching_milp, build_scheduling_milp};
pub use oracles::{
    CountingOracle, GridPathOracle, KnapsackOracle, MatchingOracle, PortfolioOracle,
    ScheduleOracle, TopKOracle,
};
pub use portfolio::solve_portfolio;
pub use simplex::simplex_solve;
pub use topk::solve_topk;

use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("branch-and-bound node budget of {limit} exhausted")]
    NodeBudgetExceeded { limit: u64 },
    #[error("barrier method did not converge within {limit} Newton steps")]
    MaxIterations { limit: usize },
    #[error("numerics failure: {0}")]
    Numerics(#[from] crate::numerics::NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of one oracle call. For `Optimal` solutions the objective always
/// equals the inner product of the cost vector with `x` in the orientation
/// the solve was asked in.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: SolveStatus,
}

impl Solution {
    pub fn infeasible(dim: usize) -> Self {
        Solution { x: vec![0.0; dim], objective: f64::INFINITY, status: SolveStatus::Infeasible }
    }

    pub fn unbounded(dim: usize) -> Self {
        Solution { x: vec![0.0; dim], objective: f64::NEG_INFINITY, status: SolveStatus::Unbounded }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// A deterministic blackbox mapping from a cost vector to one optimal
/// solution of `min_{x in F} c^T x`.
///
/// Problems whose natural orientation is maximization are wrapped so that
/// callers always hand in minimization costs; ties are broken by each
/// implementation's documented rule, never at random.
pub trait Oracle: Send + Sync {
    fn dim(&self) -> usize;

    /// Solve `min c^T x` over the fixed feasible set.
    fn solve(&self, cost: &[f64]) -> Result<Solution, SolverError>;
}

impl<T: Oracle + ?Sized> Oracle for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn solve(&self, cost: &[f64]) -> Result<Solution, SolverError> {
        (**self).solve(cost)
    }
}

impl<T: Oracle + ?Sized> Oracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn solve(&self, cost: &[f64]) -> Result<Solution, SolverError> {
        (**self).solve(cost)
    }
}
