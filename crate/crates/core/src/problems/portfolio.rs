use super::{DataError, Dataset, Features, PortfolioSpec, ProblemInstance, Split};
use crate::numerics::{sample_gaussian, Matrix, RngStream};

/// Synthetic generator for the risk-bounded portfolio benchmark.
///
/// Returns are built from a conditional mean
/// `mean_j = ((0.05/sqrt(p)) (B z)_j + 0.1^(1/deg))^deg`, a common factor
/// term `L f` and idiosyncratic noise `0.01 * noise * xi`. The covariance
/// `Sigma = L L^T + (0.01 noise)^2 I` and the risk bound
/// `gamma = 2.25 e^T Sigma e` (with `e` the equal allocation) are fixed per
/// dataset.
#[derive(Debug, Clone)]
pub struct PortfolioGenerator {
    mapping: Matrix,
    factor_loadings: Matrix,
    deg: u32,
    noise: f64,
    feature_dim: usize,
    spec: PortfolioSpec,
}

impl PortfolioGenerator {
    pub fn new(
        assets: usize,
        feature_dim: usize,
        deg: u32,
        noise: f64,
        rng: &mut RngStream,
    ) -> Result<Self, DataError> {
        if assets < 2 {
            return Err(DataError::InvalidParam(format!("need at least 2 assets, got {assets}")));
        }
        if deg < 1 || feature_dim < 1 {
            return Err(DataError::InvalidParam("deg and feature dim must be >= 1".into()));
        }
        if noise < 0.0 {
            return Err(DataError::InvalidParam("noise magnitude must be >= 0".into()));
        }
        let mut mapping = Matrix::zeros(assets, feature_dim);
        for r in 0..assets {
            for c in 0..feature_dim {
                mapping.set(r, c, if rng.bernoulli(0.5) { 1.0 } else { 0.0 });
            }
        }
        let half = 0.0025 * noise;
        let mut factor_loadings = Matrix::zeros(assets, 4);
        for r in 0..assets {
            for c in 0..4 {
                factor_loadings.set(r, c, rng.uniform_in(-half, half));
            }
        }
        // Sigma = L L^T + (0.01 noise)^2 I.
        let mut sigma = factor_loadings.matmul(&factor_loadings.transpose());
        let idio = (0.01 * noise) * (0.01 * noise);
        for i in 0..assets {
            sigma.add_to(i, i, idio);
        }
        let e = vec![1.0 / assets as f64; assets];
        let gamma = 2.25 * crate::numerics::dot(&e, &sigma.matvec(&e));
        let degenerate_risk = noise == 0.0;
        let spec = PortfolioSpec { sigma, gamma, assets, degenerate_risk };
        Ok(PortfolioGenerator { mapping, factor_loadings, deg, noise, feature_dim, spec })
    }

    pub fn spec(&self) -> &PortfolioSpec {
        &self.spec
    }

    pub fn mean_returns(&self, z: &[f64]) -> Vec<f64> {
        let p = self.feature_dim as f64;
        let base = (0.1_f64).powf(1.0 / self.deg as f64);
        self.mapping
            .matvec(z)
            .into_iter()
            .map(|bz| (0.05 / p.sqrt() * bz + base).powi(self.deg as i32))
            .collect()
    }

    pub fn sample(&self, n: usize, split: Split, rng: &mut RngStream) -> Result<Dataset, DataError> {
        let d = self.spec.assets;
        let mut instances = Vec::with_capacity(n);
        for _ in 0..n {
            let z = sample_gaussian(rng, self.feature_dim);
            let mut returns = self.mean_returns(&z);
            let f = sample_gaussian(rng, 4);
            let lf = self.factor_loadings.matvec(&f);
            let xi = sample_gaussian(rng, d);
            for j in 0..d {
                returns[j] += lf[j] + 0.01 * self.noise * xi[j];
            }
            instances.push(ProblemInstance {
                features: Features::Vector(z),
                true_cost: returns,
                true_solution: None,
            });
        }
        Dataset::new(instances, split)
    }
}

/// One-shot form: draws the hidden model, then one dataset from it.
pub fn gen_portfolio_data(
    n_samples: usize,
    assets: usize,
    feature_dim: usize,
    deg: u32,
    noise: f64,
    rng: &mut RngStream,
) -> Result<(Dataset, PortfolioSpec), DataError> {
    let gen = PortfolioGenerator::new(assets, feature_dim, deg, noise, rng)?;
    let data = gen.sample(n_samples, Split::Train, rng)?;
    Ok((data, gen.spec))
}

/// Cholesky factorization; fails when the matrix is not PSD (within a small
/// diagonal tolerance). Used to certify generated covariance matrices.
pub(crate) fn cholesky(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum < -1e-12 {
                    return None;
                }
                l.set(i, j, sum.max(0.0).sqrt());
            } else {
                let diag = l.get(j, j);
                if diag.abs() < 1e-15 {
                    if sum.abs() > 1e-9 {
                        return None;
                    }
                    l.set(i, j, 0.0);
                } else {
                    l.set(i, j, sum / diag);
                }
            }
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_collapses_to_conditional_mean() {
        let mut rng = RngStream::new(0, 0);
        let gen = PortfolioGenerator::new(5, 3, 1, 0.0, &mut rng).unwrap();
        assert!(gen.spec().degenerate_risk);
        assert!(gen.spec().gamma.abs() < 1e-18);
        let data = gen.sample(10, Split::Train, &mut rng).unwrap();
        for inst in &data.instances {
            let mean = gen.mean_returns(inst.features.as_vector().unwrap());
            for (a, b) in inst.true_cost.iter().zip(&mean) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn deg_one_zero_features_gives_tenth() {
        let mut rng = RngStream::new(1, 0);
        let gen = PortfolioGenerator::new(4, 5, 1, 1.0, &mut rng).unwrap();
        let mean = gen.mean_returns(&[0.0; 5]);
        assert!(mean.iter().all(|&m| (m - 0.1).abs() < 1e-15));
    }

    #[test]
    fn sigma_is_psd_and_gamma_matches() {
        let mut rng = RngStream::new(2, 0);
        let (_, spec) = gen_portfolio_data(20, 10, 5, 4, 1.0, &mut rng).unwrap();
        assert!(cholesky(&spec.sigma).is_some(), "Sigma must factor");
        let e = vec![0.1; 10];
        let expect = 2.25 * crate::numerics::dot(&e, &spec.sigma.matvec(&e));
        assert!((spec.gamma - expect).abs() < 1e-15);
        // Symmetry.
        for i in 0..10 {
            for j in 0..10 {
                assert!((spec.sigma.get(i, j) - spec.sigma.get(j, i)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_single_asset() {
        let mut rng = RngStream::new(3, 0);
        assert!(gen_portfolio_data(5, 1, 3, 1, 1.0, &mut rng).is_err());
    }
}
