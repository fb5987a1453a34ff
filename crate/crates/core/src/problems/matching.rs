use super::{DataError, Dataset, Features, MatchingSpec, ProblemInstance, Split};
use crate::numerics::{sample_gaussian, Matrix, RngStream};
use crate::solvers::{branch_and_bound, build_matching_milp, BnbLimits};

/// Synthetic diverse bipartite matching generator.
///
/// Each node carries a Bernoulli feature vector and a field label; an edge's
/// feature is the concatenation of its endpoints' features and its
/// ground-truth likelihood comes from a fixed logistic map of that edge
/// feature. The same-field indicator and the diversity fractions are
/// problem-level constants; node features (and hence likelihoods) are fresh
/// per instance.
#[derive(Debug, Clone)]
pub struct MatchingGenerator {
    spec: MatchingSpec,
    /// Fixed logistic readout over edge features.
    readout: Vec<f64>,
    bias: f64,
    node_feature_dim: usize,
}

impl MatchingGenerator {
    pub fn new(
        n_per_side: usize,
        edge_feature_dim: usize,
        rho1: f64,
        rho2: f64,
        rng: &mut RngStream,
    ) -> Result<Self, DataError> {
        if n_per_side < 2 {
            return Err(DataError::InvalidParam("need at least 2 nodes per side".into()));
        }
        if edge_feature_dim % 2 != 0 || edge_feature_dim == 0 {
            return Err(DataError::InvalidParam(
                "edge feature dim must be even (a concatenation of two node vectors)".into(),
            ));
        }
        let n = n_per_side;
        // Field labels. Both sides half/half so moderate diversity targets
        // stay satisfiable.
        let field_left: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let field_right: Vec<u8> = (0..n).map(|j| ((j / 2 + j) % 2) as u8).collect();
        let mut same_field = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                same_field[i * n + j] = (field_left[i] == field_right[j]) as u8;
            }
        }
        let spec = MatchingSpec::new(n, same_field, rho1, rho2)?;

        let scale = 2.0 / (edge_feature_dim as f64).sqrt();
        let readout: Vec<f64> =
            sample_gaussian(rng, edge_feature_dim).into_iter().map(|v| v * scale).collect();
        let bias = rng.uniform_in(-0.5, 0.5);
        let gen = MatchingGenerator {
            spec,
            readout,
            bias,
            node_feature_dim: edge_feature_dim / 2,
        };
        gen.check_feasible()?;
        Ok(gen)
    }

    pub fn spec(&self) -> &MatchingSpec {
        &self.spec
    }

    /// A non-empty matching must satisfy the diversity fractions, checked by
    /// maximizing cardinality once.
    fn check_feasible(&self) -> Result<(), DataError> {
        let ones = vec![1.0; self.spec.edge_count()];
        let model = build_matching_milp(&self.spec, &ones);
        let sol = branch_and_bound(&model, &BnbLimits::default())?;
        if !sol.is_optimal() || sol.objective < 0.5 {
            return Err(DataError::InfeasibleDiversity {
                rho1: self.spec.rho1,
                rho2: self.spec.rho2,
            });
        }
        Ok(())
    }

    pub fn sample(&self, n_samples: usize, split: Split, rng: &mut RngStream) -> Result<Dataset, DataError> {
        let n = self.spec.n;
        let half = self.node_feature_dim;
        let mut instances = Vec::with_capacity(n_samples);
        for _ in 0..n_samples {
            let left: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..half).map(|_| if rng.bernoulli(0.5) { 1.0 } else { 0.0 }).collect())
                .collect();
            let right: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..half).map(|_| if rng.bernoulli(0.5) { 1.0 } else { 0.0 }).collect())
                .collect();
            let mut rows = Vec::with_capacity(n * n);
            let mut likelihoods = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut feat = Vec::with_capacity(2 * half);
                    feat.extend_from_slice(&left[i]);
                    feat.extend_from_slice(&right[j]);
                    let score = crate::numerics::dot(&self.readout, &feat) + self.bias;
                    likelihoods.push(1.0 / (1.0 + (-score).exp()));
                    rows.push(feat);
                }
            }
            instances.push(ProblemInstance {
                features: Features::Matrix(Matrix::from_rows(&rows)),
                true_cost: likelihoods,
                true_solution: None,
            });
        }
        Dataset::new(instances, split)
    }
}

/// One-shot form returning a dataset plus the matching constants.
pub fn gen_matching_data(
    n_per_side: usize,
    edge_feature_dim: usize,
    rho1: f64,
    rho2: f64,
    n_samples: usize,
    rng: &mut RngStream,
) -> Result<(Dataset, MatchingSpec), DataError> {
    let gen = MatchingGenerator::new(n_per_side, edge_feature_dim, rho1, rho2, rng)?;
    let data = gen.sample(n_samples, Split::Train, rng)?;
    Ok((data, gen.spec))
}
