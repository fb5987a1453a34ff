use super::{DataError, Dataset, Features, ProblemInstance, Split, TopKSpec};
use crate::numerics::RngStream;
use crate::solvers::solve_topk;

/// Subset-selection data: features uniform on `(0,1)^n`, target solution the
/// indicator of the k largest feature entries (ties to the lowest index).
/// The ground-truth data here are solutions; the feature vector doubles as
/// the latent value vector.
pub fn gen_topk_data(
    n: usize,
    k: usize,
    n_samples: usize,
    rng: &mut RngStream,
) -> Result<(Dataset, TopKSpec), DataError> {
    let spec = TopKSpec::new(n, k)?;
    let mut instances = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let z: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let target = solve_topk(&spec, &z);
        instances.push(ProblemInstance {
            features: Features::Vector(z.clone()),
            true_cost: z,
            true_solution: Some(target.x),
        });
    }
    Ok((Dataset::new(instances, Split::Train)?, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduction_size() {
        let mut rng = RngStream::new(0, 0);
        let (data, spec) = gen_topk_data(25, 5, 1000, &mut rng).unwrap();
        assert_eq!(data.len(), 1000);
        assert_eq!(spec.k, 5);
        for inst in &data.instances {
            let sum: f64 = inst.true_solution.as_ref().unwrap().iter().sum();
            assert_eq!(sum, 5.0);
        }
    }

    #[test]
    fn small_example() {
        let spec = TopKSpec::new(3, 1).unwrap();
        let sol = solve_topk(&spec, &[0.9, 0.1, 0.5]);
        assert_eq!(sol.x, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn targets_match_sorting_oracle() {
        let mut rng = RngStream::new(1, 0);
        let (data, _) = gen_topk_data(8, 3, 100, &mut rng).unwrap();
        for inst in &data.instances {
            let z = inst.features.as_vector().unwrap();
            let mut idx: Vec<usize> = (0..8).collect();
            idx.sort_by(|&a, &b| z[b].partial_cmp(&z[a]).unwrap().then(a.cmp(&b)));
            let mut expect = vec![0.0; 8];
            for &i in idx.iter().take(3) {
                expect[i] = 1.0;
            }
            assert_eq!(inst.true_solution.as_ref().unwrap(), &expect);
        }
    }

    #[test]
    fn rejects_out_of_range_k() {
        let mut rng = RngStream::new(2, 0);
        assert!(gen_topk_data(5, 0, 10, &mut rng).is_err());
        assert!(gen_topk_data(5, 6, 10, &mut rng).is_err());
    }
}
