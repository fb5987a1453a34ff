use super::{LossError, LossEval};
use crate::numerics::dot;
use crate::solvers::Oracle;

/// SPO+ loss and subgradient, in the canonical minimization form:
///
/// `L = 2 c_hat . x*(c) - c . x*(c) - min_x (2 c_hat - c) . x`
///
/// with subgradient `x*(c) - x*(2 c_hat - c)`. A convex upper bound on the
/// regret, costing one oracle call per evaluation (the caller supplies the
/// precomputed `x*(c)`).
pub fn spo_plus(
    c_hat: &[f64],
    c: &[f64],
    x_star_c: &[f64],
    oracle: &dyn Oracle,
) -> Result<LossEval, LossError> {
    if c_hat.len() != c.len() || c.len() != x_star_c.len() {
        return Err(LossError::DimMismatch(format!(
            "c_hat {}, c {}, x*(c) {}",
            c_hat.len(),
            c.len(),
            x_star_c.len()
        )));
    }
    let shifted: Vec<f64> = c_hat.iter().zip(c).map(|(ch, ci)| 2.0 * ch - ci).collect();
    let inner = oracle.solve(&shifted)?;
    let loss = 2.0 * dot(c_hat, x_star_c) - dot(c, x_star_c) - inner.objective;
    let grad: Vec<f64> = x_star_c.iter().zip(&inner.x).map(|(a, b)| a - b).collect();
    Ok(LossEval { loss, grad_c: grad, solver_calls_used: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use crate::problems::KnapsackSpec;
    use crate::solvers::KnapsackOracle;

    fn unit_knapsack(n: usize, cap: u32) -> KnapsackOracle {
        KnapsackOracle::new(KnapsackSpec::from_integer_weights(vec![1; n], cap).unwrap())
    }

    #[test]
    fn exact_prediction_gives_zero_subgradient() {
        let oracle = unit_knapsack(4, 2);
        let c = vec![-3.0, -1.0, -2.0, -0.5];
        let x_star = oracle.solve(&c).unwrap().x;
        let e = spo_plus(&c, &c, &x_star, &oracle).unwrap();
        assert!(e.grad_c.iter().all(|&g| g == 0.0));
        assert_eq!(e.solver_calls_used, 1);
    }

    #[test]
    fn two_item_example() {
        // Values (2.5, 3), capacity 1, prediction (2.5, 2); canonical costs
        // are negated values. 2 c_hat - c = (-2.5, -1), so the inner solve
        // picks item 1 while the truth picks item 2.
        let oracle = unit_knapsack(2, 1);
        let c = vec![-2.5, -3.0];
        let c_hat = vec![-2.5, -2.0];
        let x_star_c = oracle.solve(&c).unwrap().x;
        assert_eq!(x_star_c, vec![0.0, 1.0]);
        let e = spo_plus(&c_hat, &c, &x_star_c, &oracle).unwrap();
        // Inner argmin of (-2.5, -1) over at most one item is (1, 0).
        assert_eq!(e.grad_c, vec![-1.0, 1.0]);
        // L = 2(-2) - (-3) - (-2.5) = -4 + 3 + 2.5 = 1.5, and regret is 0.5.
        assert!((e.loss - 1.5).abs() < 1e-12);
        assert!(e.loss >= 0.5 - 1e-12);
    }

    #[test]
    fn dominates_regret_on_random_pairs() {
        let oracle = unit_knapsack(8, 3);
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let c: Vec<f64> = (0..8).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
            let c_hat: Vec<f64> = (0..8).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
            let x_star_c = oracle.solve(&c).unwrap();
            let x_star_hat = oracle.solve(&c_hat).unwrap();
            let regret = dot(&c, &x_star_hat.x) - x_star_c.objective;
            let e = spo_plus(&c_hat, &c, &x_star_c.x, &oracle).unwrap();
            assert!(
                e.loss >= regret - 1e-9,
                "SPO+ {} fell below regret {regret}",
                e.loss
            );
        }
    }

    #[test]
    fn midpoint_convexity() {
        let oracle = unit_knapsack(6, 2);
        let mut rng = RngStream::new(2, 0);
        let c: Vec<f64> = (0..6).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let x_star_c = oracle.solve(&c).unwrap().x;
        for _ in 0..1000 {
            let a: Vec<f64> = (0..6).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
            let b: Vec<f64> = (0..6).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let la = spo_plus(&a, &c, &x_star_c, &oracle).unwrap().loss;
            let lb = spo_plus(&b, &c, &x_star_c, &oracle).unwrap().loss;
            let lm = spo_plus(&mid, &c, &x_star_c, &oracle).unwrap().loss;
            assert!(lm <= 0.5 * (la + lb) + 1e-9, "midpoint {lm} vs average {}", 0.5 * (la + lb));
        }
    }
}
