use super::energy::{FEATURES_PER_SLOT, SLOTS_PER_DAY};
use super::{DataError, Dataset, KnapsackSpec, ProblemInstance};
use crate::numerics::RngStream;
use rand_distr::{Distribution, Normal};

/// Target weight sum of a reproduction-mode knapsack instance.
pub const WEIGHT_SUM: u32 = 240;

/// Build knapsack instances from half-hourly energy price data.
///
/// Weights are drawn from `{3, 5, 7}` and resampled until they sum to 240.
/// Item values couple price and weight, `value_i = price_i * w_i + xi` with
/// `xi ~ N(0, 25)` (variance 25), clipped at zero from below so no item
/// carries negative value. Features pass through from the price data.
pub fn gen_knapsack_data(
    prices: &Dataset,
    capacity: u32,
    rng: &mut RngStream,
) -> Result<(Dataset, KnapsackSpec), DataError> {
    for (i, inst) in prices.instances.iter().enumerate() {
        let ok = inst.true_cost.len() == SLOTS_PER_DAY
            && inst
                .features
                .as_matrix()
                .is_some_and(|m| m.rows() == SLOTS_PER_DAY && m.cols() == FEATURES_PER_SLOT);
        if !ok {
            return Err(DataError::IngestError {
                row: i + 1,
                reason: "price instance is not a 48-slot day with 8 features per slot".into(),
            });
        }
    }

    let weights = sample_weights(SLOTS_PER_DAY, WEIGHT_SUM, rng);
    let spec = KnapsackSpec::from_integer_weights(weights, capacity)?;

    let noise = Normal::new(0.0, 5.0).expect("valid normal"); // variance 25
    let mut instances = Vec::with_capacity(prices.len());
    for inst in &prices.instances {
        let values: Vec<f64> = inst
            .true_cost
            .iter()
            .zip(spec.weights())
            .map(|(&p, &w)| (p * w as f64 + noise.sample(rng)).max(0.0))
            .collect();
        instances.push(ProblemInstance {
            features: inst.features.clone(),
            true_cost: values,
            true_solution: None,
        });
    }
    Ok((Dataset::new(instances, prices.split)?, spec))
}

fn sample_weights(n: usize, target_sum: u32, rng: &mut RngStream) -> Vec<u32> {
    loop {
        let w: Vec<u32> = (0..n).map(|_| *rng.pick(&[3u32, 5, 7])).collect();
        if w.iter().sum::<u32>() == target_sum {
            return w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{parse_energy_csv, synthesize_energy_csv};
    use crate::solvers::solve_knapsack;

    fn price_data(days: usize, seed: u64) -> Dataset {
        let mut rng = RngStream::new(seed, 0);
        parse_energy_csv(&synthesize_energy_csv(days, &mut rng)).unwrap()
    }

    #[test]
    fn weights_sum_to_240() {
        let prices = price_data(3, 0);
        let mut rng = RngStream::new(1, 0);
        let (_, spec) = gen_knapsack_data(&prices, 120, &mut rng).unwrap();
        assert_eq!(spec.weights().iter().sum::<u32>(), WEIGHT_SUM);
        assert!(spec.weights().iter().all(|w| [3, 5, 7].contains(w)));
    }

    #[test]
    fn reproduction_capacities_build() {
        let prices = price_data(2, 1);
        for cap in [60, 120, 180] {
            let mut rng = RngStream::new(2, 0);
            let (data, spec) = gen_knapsack_data(&prices, cap, &mut rng).unwrap();
            assert_eq!(spec.capacity(), cap);
            assert_eq!(data.len(), 2);
        }
    }

    #[test]
    fn non_binding_capacity_selects_every_positive_item() {
        let prices = price_data(2, 2);
        let mut rng = RngStream::new(3, 0);
        let (data, spec) = gen_knapsack_data(&prices, WEIGHT_SUM, &mut rng).unwrap();
        for inst in &data.instances {
            let sol = solve_knapsack(&spec, &inst.true_cost);
            for (j, &v) in inst.true_cost.iter().enumerate() {
                assert_eq!(sol.x[j] == 1.0, v > 0.0, "item {j} with value {v}");
            }
        }
    }

    #[test]
    fn values_are_clipped_at_zero() {
        let prices = price_data(5, 3);
        let mut rng = RngStream::new(4, 0);
        let (data, _) = gen_knapsack_data(&prices, 60, &mut rng).unwrap();
        for inst in &data.instances {
            assert!(inst.true_cost.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn malformed_price_rows_are_rejected() {
        let mut bad = price_data(1, 4);
        bad.instances[0].true_cost.pop();
        let mut rng = RngStream::new(5, 0);
        assert!(matches!(
            gen_knapsack_data(&bad, 60, &mut rng),
            Err(DataError::IngestError { .. })
        ));
    }
}
