//! LP-relaxation branch-and-bound, exact at desk scale.
//!
//! Branching is on the most fractional variable (lowest index on ties),
//! depth first with the floor branch explored first. The node limit is a
//! count, not a time limit, so runs are deterministic across machines.

use super::{simplex_solve, MilpModel, Sense, Solution, SolveStatus, SolverError};

const INT_TOL: f64 = 1e-6;
/// Bound pruning slack, keeps ties resolved toward the first incumbent found.
const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BnbLimits {
    pub max_nodes: u64,
}

impl Default for BnbLimits {
    fn default() -> Self {
        BnbLimits { max_nodes: 1_000_000 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BnbStats {
    /// LP relaxations solved.
    pub nodes: u64,
    /// Nodes that actually branched (zero when the root LP is integral).
    pub branched: u64,
}

pub fn branch_and_bound(model: &MilpModel, limits: &BnbLimits) -> Result<Solution, SolverError> {
    branch_and_bound_with_stats(model, limits).map(|(sol, _)| sol)
}

pub fn branch_and_bound_with_stats(
    model: &MilpModel,
    limits: &BnbLimits,
) -> Result<(Solution, BnbStats), SolverError> {
    let n = model.lp.num_vars();
    for &j in &model.integers {
        let (lo, hi) = model.lp.bounds[j];
        if !hi.is_finite() {
            return Err(SolverError::InvalidParam(format!(
                "integer variable {j} must be bounded, got [{lo}, {hi})"
            )));
        }
    }

    // Canonicalize to minimization; restore the natural objective at the end.
    let mut lp = model.lp.clone();
    let flip = lp.sense == Sense::Max;
    if flip {
        lp.sense = Sense::Min;
        for c in &mut lp.objective {
            *c = -*c;
        }
    }

    let mut stats = BnbStats::default();
    let mut incumbent: Option<Solution> = None;
    let mut stack: Vec<Vec<(f64, f64)>> = vec![lp.bounds.clone()];
    let mut root_unbounded = false;

    while let Some(bounds) = stack.pop() {
        if stats.nodes >= limits.max_nodes {
            return Err(SolverError::NodeBudgetExceeded { limit: limits.max_nodes });
        }
        stats.nodes += 1;
        let mut node_lp = lp.clone();
        node_lp.bounds = bounds;
        let relax = simplex_solve(&node_lp);
        match relax.status {
            SolveStatus::Infeasible => continue,
            SolveStatus::Unbounded => {
                if stats.nodes == 1 {
                    root_unbounded = true;
                }
                continue;
            }
            SolveStatus::Optimal => {}
        }
        if let Some(best) = &incumbent {
            if relax.objective >= best.objective - PRUNE_TOL {
                continue;
            }
        }
        // Most fractional integer variable, lowest index on ties.
        let mut branch_var: Option<(usize, f64)> = None;
        for &j in &model.integers {
            let frac = relax.x[j] - relax.x[j].floor();
            let dist = frac.min(1.0 - frac);
            if dist > INT_TOL {
                let better = match branch_var {
                    None => true,
                    Some((_, best_dist)) => dist > best_dist + 1e-12,
                };
                if better {
                    branch_var = Some((j, dist));
                }
            }
        }
        match branch_var {
            None => {
                // Integral: snap and accept if strictly better.
                let mut x = relax.x.clone();
                for &j in &model.integers {
                    x[j] = x[j].round();
                }
                let objective = crate::numerics::dot(&lp.objective, &x);
                if incumbent.as_ref().is_none_or(|b| objective < b.objective - PRUNE_TOL) {
                    incumbent = Some(Solution { x, objective, status: SolveStatus::Optimal });
                }
            }
            Some((j, _)) => {
                stats.branched += 1;
                let floor = relax.x[j].floor();
                let mut up = node_lp.bounds.clone();
                up[j].0 = floor + 1.0;
                let mut down = node_lp.bounds;
                down[j].1 = floor;
                if up[j].0 <= up[j].1 {
                    stack.push(up);
                }
                // Pushed last so the floor branch is explored first.
                if down[j].0 <= down[j].1 {
                    stack.push(down);
                }
            }
        }
    }

    let sol = match incumbent {
        Some(mut sol) => {
            if flip {
                sol.objective = -sol.objective;
            }
            sol
        }
        None if root_unbounded => Solution::unbounded(n),
        None => Solution::infeasible(n),
    };
    Ok((sol, stats))
}
