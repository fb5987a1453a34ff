use super::{Solution, SolveStatus};
use crate::problems::TopKSpec;

/// Indicator of the `k` largest entries of `values`, ties resolved toward
/// the lowest index.
pub fn solve_topk(spec: &TopKSpec, values: &[f64]) -> Solution {
    assert_eq!(values.len(), spec.n, "value dimension must match spec");
    let mut order: Vec<usize> = (0..spec.n).collect();
    order.sort_by(|&a, &b| {
        values[b].partial_cmp(&values[a]).expect("finite values").then(a.cmp(&b))
    });
    let mut x = vec![0.0; spec.n];
    for &i in order.iter().take(spec.k) {
        x[i] = 1.0;
    }
    let objective = crate::numerics::dot(values, &x);
    Solution { x, objective, status: SolveStatus::Optimal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    #[test]
    fn picks_single_max() {
        let spec = TopKSpec::new(3, 1).unwrap();
        let sol = solve_topk(&spec, &[0.1, 0.9, 0.5]);
        assert_eq!(sol.x, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn k_equals_n_selects_all() {
        let spec = TopKSpec::new(4, 4).unwrap();
        let sol = solve_topk(&spec, &[-1.0, 0.0, 2.0, 0.5]);
        assert_eq!(sol.x, vec![1.0; 4]);
    }

    #[test]
    fn ties_prefer_lowest_index() {
        let spec = TopKSpec::new(4, 2).unwrap();
        let sol = solve_topk(&spec, &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(sol.x, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn matches_subset_enumeration() {
        let spec = TopKSpec::new(8, 3).unwrap();
        let mut rng = RngStream::new(2, 9);
        for _ in 0..100 {
            let values: Vec<f64> = (0..8).map(|_| rng.uniform()).collect();
            let sol = solve_topk(&spec, &values);
            let mut best = f64::NEG_INFINITY;
            for mask in 0u32..256 {
                if mask.count_ones() == 3 {
                    let v: f64 =
                        (0..8).filter(|i| mask & (1 << i) != 0).map(|i| values[i]).sum();
                    best = best.max(v);
                }
            }
            assert!((sol.objective - best).abs() < 1e-12);
        }
    }
}
