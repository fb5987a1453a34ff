use super::{DataError, Dataset, Features, GridSpec, ProblemInstance, Split, SyntheticGroundTruth};
use crate::numerics::{sample_gaussian, Matrix, RngStream};

/// Synthetic generator for the grid shortest-path benchmark.
///
/// The hidden model is a Bernoulli(0.5) matrix `B`; features are standard
/// Gaussian; edge costs follow
/// `c_j = [((B z / sqrt(p))_j + 3)^deg + 1] * xi_j` with `xi` uniform on
/// `[1 - noise, 1 + noise]`. Higher `deg` means a linear predictor is more
/// misspecified.
#[derive(Debug, Clone)]
pub struct ShortestPathGenerator {
    grid: GridSpec,
    truth: SyntheticGroundTruth,
}

impl ShortestPathGenerator {
    pub fn new(
        grid: GridSpec,
        feature_dim: usize,
        deg: u32,
        noise: f64,
        rng: &mut RngStream,
    ) -> Result<Self, DataError> {
        if feature_dim < 1 {
            return Err(DataError::InvalidParam("feature dim must be >= 1".into()));
        }
        if deg < 1 {
            return Err(DataError::InvalidParam("deg must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&noise) {
            return Err(DataError::InvalidParam(format!(
                "noise half-width must lie in [0, 1), got {noise}; costs could become non-positive"
            )));
        }
        let edges = grid.edge_count();
        let mut mapping = Matrix::zeros(edges, feature_dim);
        for r in 0..edges {
            for c in 0..feature_dim {
                mapping.set(r, c, if rng.bernoulli(0.5) { 1.0 } else { 0.0 });
            }
        }
        let truth = SyntheticGroundTruth { mapping, deg, noise, feature_dim };
        Ok(ShortestPathGenerator { grid, truth })
    }

    pub fn truth(&self) -> &SyntheticGroundTruth {
        &self.truth
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Edge costs for a fixed feature vector, before multiplicative noise.
    pub fn mean_costs(&self, z: &[f64]) -> Vec<f64> {
        let p = self.truth.feature_dim as f64;
        self.truth
            .mapping
            .matvec(z)
            .into_iter()
            .map(|bz| (bz / p.sqrt() + 3.0).powi(self.truth.deg as i32) + 1.0)
            .collect()
    }

    pub fn sample(&self, n: usize, split: Split, rng: &mut RngStream) -> Result<Dataset, DataError> {
        let mut instances = Vec::with_capacity(n);
        for _ in 0..n {
            let z = sample_gaussian(rng, self.truth.feature_dim);
            let cost: Vec<f64> = self
                .mean_costs(&z)
                .into_iter()
                .map(|base| {
                    let xi = rng.uniform_in(1.0 - self.truth.noise, 1.0 + self.truth.noise);
                    // The Gaussian tail can push the deg-odd base below zero
                    // with probability ~1e-8 per edge; floor it so path costs
                    // stay strictly positive.
                    (base * xi).max(1e-6)
                })
                .collect();
            instances.push(ProblemInstance {
                features: Features::Vector(z),
                true_cost: cost,
                true_solution: None,
            });
        }
        Dataset::new(instances, split)
    }
}

/// One-shot form: draws the ground-truth model, then one dataset from it.
pub fn gen_shortest_path_data(
    grid: &GridSpec,
    n_samples: usize,
    feature_dim: usize,
    deg: u32,
    noise: f64,
    rng: &mut RngStream,
) -> Result<(Dataset, SyntheticGroundTruth), DataError> {
    let gen = ShortestPathGenerator::new(grid.clone(), feature_dim, deg, noise, rng)?;
    let data = gen.sample(n_samples, Split::Train, rng)?;
    Ok((data, gen.truth))
}
