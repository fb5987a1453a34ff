//! Logarithmic-barrier Newton method for the risk-bounded portfolio problem:
//! maximize `r^T x` subject to `x^T Sigma x <= gamma`, `1^T x <= 1`, `x >= 0`.
//!
//! One quadratic constraint plus box and sum constraints does not warrant a
//! general conic solver; a specialized barrier method is small and testable.

use super::{Solution, SolveStatus, SolverError};
use crate::numerics::{dot, norm_inf, solve_linear_system, Matrix};
use crate::problems::PortfolioSpec;

const BARRIER_TARGET: f64 = 1e-9;
const KKT_TOL: f64 = 1e-7;
const MAX_NEWTON_STEPS: usize = 200;
const T_FACTOR: f64 = 20.0;

struct Barrier<'a> {
    sigma: &'a Matrix,
    gamma: f64,
    returns: &'a [f64],
    use_risk: bool,
    d: usize,
}

impl Barrier<'_> {
    fn risk(&self, x: &[f64]) -> f64 {
        dot(x, &self.sigma.matvec(x))
    }

    fn value(&self, t: f64, x: &[f64]) -> f64 {
        let mut v = -t * dot(self.returns, x);
        if self.use_risk {
            v -= (self.gamma - self.risk(x)).ln();
        }
        v -= (1.0 - x.iter().sum::<f64>()).ln();
        for &xi in x {
            v -= xi.ln();
        }
        v
    }

    fn strictly_feasible(&self, x: &[f64]) -> bool {
        x.iter().all(|&xi| xi > 0.0)
            && x.iter().sum::<f64>() < 1.0
            && (!self.use_risk || self.risk(x) < self.gamma)
    }

    fn gradient(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = self.returns.iter().map(|r| -t * r).collect();
        if self.use_risk {
            let sx = self.sigma.matvec(x);
            let slack = self.gamma - self.risk(x);
            for i in 0..self.d {
                g[i] += 2.0 * sx[i] / slack;
            }
        }
        let budget_slack = 1.0 - x.iter().sum::<f64>();
        for (i, &xi) in x.iter().enumerate() {
            g[i] += 1.0 / budget_slack - 1.0 / xi;
        }
        g
    }

    fn hessian(&self, x: &[f64]) -> Matrix {
        let mut h = Matrix::zeros(self.d, self.d);
        if self.use_risk {
            let sx = self.sigma.matvec(x);
            let slack = self.gamma - self.risk(x);
            for i in 0..self.d {
                for j in 0..self.d {
                    h.add_to(
                        i,
                        j,
                        2.0 * self.sigma.get(i, j) / slack + 4.0 * sx[i] * sx[j] / (slack * slack),
                    );
                }
            }
        }
        let budget_slack = 1.0 - x.iter().sum::<f64>();
        let b2 = 1.0 / (budget_slack * budget_slack);
        for i in 0..self.d {
            for j in 0..self.d {
                h.add_to(i, j, b2);
            }
        }
        for (i, &xi) in x.iter().enumerate() {
            h.add_to(i, i, 1.0 / (xi * xi));
        }
        h
    }

    /// Largest step keeping `x + a*d` strictly inside, before damping.
    fn max_step(&self, x: &[f64], dir: &[f64]) -> f64 {
        let mut a: f64 = 1.0 / 0.99; // allow full steps after damping
        for i in 0..self.d {
            if dir[i] < 0.0 {
                a = a.min(-x[i] / dir[i]);
            }
        }
        let dsum: f64 = dir.iter().sum();
        if dsum > 0.0 {
            a = a.min((1.0 - x.iter().sum::<f64>()) / dsum);
        }
        if self.use_risk {
            // q(x + a d) = q(x) + 2 a x'Sd + a^2 d'Sd < gamma
            let sd = self.sigma.matvec(dir);
            let qa = dot(dir, &sd);
            let qb = 2.0 * dot(x, &sd);
            let qc = self.risk(x) - self.gamma;
            if qa > 0.0 {
                let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
                a = a.min((-qb + disc) / (2.0 * qa));
            } else if qb > 0.0 {
                a = a.min(-qc / qb);
            }
        }
        0.99 * a
    }
}

/// Solve the portfolio problem to a KKT residual of `1e-7` with the barrier
/// parameter driven below `1e-9`.
pub fn solve_portfolio(spec: &PortfolioSpec, returns: &[f64]) -> Result<Solution, SolverError> {
    let d = spec.assets;
    if returns.len() != d {
        return Err(SolverError::InvalidParam(format!(
            "returns dimension {} does not match asset count {d}",
            returns.len()
        )));
    }
    if spec.gamma < 0.0 {
        return Err(SolverError::InvalidParam("gamma must be non-negative".into()));
    }
    let use_risk = !spec.degenerate_risk && spec.gamma > 1e-14;
    let barrier = Barrier { sigma: &spec.sigma, gamma: spec.gamma, returns, use_risk, d };
    // Number of barrier terms, used for the duality-gap style bookkeeping.
    let m_constraints = if use_risk { d + 2 } else { d + 1 } as f64;

    // Strictly feasible start: a small equal allocation.
    let mut alpha = 0.5 / d as f64;
    if use_risk {
        let ones_risk = dot(&vec![1.0; d], &spec.sigma.matvec(&vec![1.0; d]));
        if ones_risk > 0.0 {
            alpha = alpha.min((spec.gamma / (2.0 * ones_risk)).sqrt());
        }
    }
    let mut x = vec![alpha; d];
    debug_assert!(barrier.strictly_feasible(&x));

    let mut t = 1.0;
    let mut steps = 0usize;
    loop {
        // Newton centering at this t.
        loop {
            let g = barrier.gradient(t, &x);
            let h = barrier.hessian(&x);
            let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
            let dir = solve_linear_system(&h, &neg_g)?;
            let decrement2 = -dot(&g, &dir);
            if decrement2 <= 2e-12 {
                break;
            }
            if steps >= MAX_NEWTON_STEPS {
                return Err(SolverError::MaxIterations { limit: MAX_NEWTON_STEPS });
            }
            steps += 1;
            let mut a = barrier.max_step(&x, &dir).min(1.0);
            let f0 = barrier.value(t, &x);
            // Armijo backtracking.
            for _ in 0..60 {
                let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + a * di).collect();
                if barrier.strictly_feasible(&trial)
                    && barrier.value(t, &trial) <= f0 - 0.25 * a * decrement2
                {
                    x = trial;
                    break;
                }
                a *= 0.5;
            }
        }
        if 1.0 / t <= BARRIER_TARGET && kkt_residual(&barrier, t, &x) <= KKT_TOL {
            break;
        }
        if 1.0 / t <= BARRIER_TARGET * 1e-3 {
            // Residual refuses to drop despite a tiny barrier parameter.
            return Err(SolverError::MaxIterations { limit: MAX_NEWTON_STEPS });
        }
        let _ = m_constraints;
        t *= T_FACTOR;
    }

    let objective = dot(returns, &x);
    Ok(Solution { x, objective, status: SolveStatus::Optimal })
}

/// Max-norm stationarity residual of the original problem, using the dual
/// estimates induced by the barrier at parameter `t`.
fn kkt_residual(b: &Barrier<'_>, t: f64, x: &[f64]) -> f64 {
    let mut res: Vec<f64> = b.returns.iter().map(|r| -r).collect();
    if b.use_risk {
        let slack = b.gamma - b.risk(x);
        let lambda = 1.0 / (t * slack);
        let sx = b.sigma.matvec(x);
        for i in 0..b.d {
            res[i] += 2.0 * lambda * sx[i];
        }
    }
    let nu = 1.0 / (t * (1.0 - x.iter().sum::<f64>()));
    for (i, &xi) in x.iter().enumerate() {
        res[i] += nu - 1.0 / (t * xi);
    }
    norm_inf(&res)
}
