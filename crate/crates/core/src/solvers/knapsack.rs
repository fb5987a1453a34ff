use super::{Solution, SolveStatus};
use crate::problems::KnapsackSpec;

/// Maximize `values . x` subject to the weight capacity, by dynamic
/// programming over capacity.
///
/// Traceback prefers leaving an item out whenever that loses nothing, so the
/// solution is the lexicographically smallest optimal indicator vector and
/// items with non-positive value are never selected.
pub fn solve_knapsack(spec: &KnapsackSpec, values: &[f64]) -> Solution {
    let n = spec.item_count();
    assert_eq!(values.len(), n, "value dimension must match weights");
    let cap = spec.capacity() as usize;
    let weights = spec.weights();

    // best[i][w] = max value using items i..n with remaining capacity w.
    let width = cap + 1;
    let mut best = vec![0.0_f64; (n + 1) * width];
    for i in (0..n).rev() {
        let wi = weights[i] as usize;
        for w in 0..=cap {
            let skip = best[(i + 1) * width + w];
            let mut v = skip;
            if wi <= w {
                let take = values[i] + best[(i + 1) * width + (w - wi)];
                if take > skip {
                    v = take;
                }
            }
            best[i * width + w] = v;
        }
    }

    let mut x = vec![0.0; n];
    let mut w = cap;
    for i in 0..n {
        let wi = weights[i] as usize;
        if wi <= w {
            let take = values[i] + best[(i + 1) * width + (w - wi)];
            // Strict improvement only: ties resolve to "leave it out".
            if take > best[(i + 1) * width + w] {
                x[i] = 1.0;
                w -= wi;
            }
        }
    }

    let objective = crate::numerics::dot(values, &x);
    Solution { x, objective, status: SolveStatus::Optimal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn unit_spec(n: usize, capacity: u32) -> KnapsackSpec {
        KnapsackSpec::from_integer_weights(vec![1; n], capacity).unwrap()
    }

    #[test]
    fn two_items_capacity_one() {
        let spec = unit_spec(2, 1);
        let sol = solve_knapsack(&spec, &[2.5, 3.0]);
        assert_eq!(sol.x, vec![0.0, 1.0]);
        assert!((sol.objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_binding_capacity_selects_all_positive() {
        let spec = KnapsackSpec::from_integer_weights(vec![3, 5, 7], 15).unwrap();
        let sol = solve_knapsack(&spec, &[1.0, -2.0, 0.5]);
        assert_eq!(sol.x, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn zero_value_items_stay_out() {
        let spec = unit_spec(3, 3);
        let sol = solve_knapsack(&spec, &[0.0, 1.0, 0.0]);
        assert_eq!(sol.x, vec![0.0, 1.0, 0.0]);
    }

    pub(crate) fn exhaustive_best(spec: &KnapsackSpec, values: &[f64]) -> f64 {
        let n = spec.item_count();
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << n) {
            let mut weight = 0u32;
            let mut value = 0.0;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    weight += spec.weights()[i];
                    value += values[i];
                }
            }
            if weight <= spec.capacity() && value > best {
                best = value;
            }
        }
        best
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = RngStream::new(5, 3);
        for trial in 0..50 {
            let n = 8 + (trial % 8);
            let weights: Vec<u32> = (0..n).map(|_| *rng.pick(&[3u32, 5, 7])).collect();
            let total: u32 = weights.iter().sum();
            let spec = KnapsackSpec::from_integer_weights(weights, total / 2).unwrap();
            let values: Vec<f64> = (0..n).map(|_| rng.uniform_in(-1.0, 10.0)).collect();
            let sol = solve_knapsack(&spec, &values);
            let best = exhaustive_best(&spec, &values);
            assert!(
                (sol.objective - best).abs() < 1e-9,
                "trial {trial}: DP {} vs exhaustive {}",
                sol.objective,
                best
            );
        }
    }
}
