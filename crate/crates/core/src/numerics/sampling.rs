use super::{NumericsError, RngStream};
use rand_distr::{Distribution, Gamma, StandardNormal};

/// `n` i.i.d. draws of Gumbel(0, `scale`), via `-scale * ln(-ln U)`.
pub fn sample_gumbel(rng: &mut RngStream, n: usize, scale: f64) -> Result<Vec<f64>, NumericsError> {
    if scale <= 0.0 {
        return Err(NumericsError::InvalidScale(scale));
    }
    if n == 0 {
        return Err(NumericsError::InvalidParam("sample_gumbel: n must be >= 1".into()));
    }
    Ok((0..n)
        .map(|_| {
            let u = rng.uniform().clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
            -scale * (-u.ln()).ln()
        })
        .collect())
}

/// `n` i.i.d. draws of `N(0, 1)`.
pub fn sample_gaussian(rng: &mut RngStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Number of Gamma terms in the Sum-of-Gamma construction. The series
/// converges quickly; ten terms put the truncation bias well below the
/// Monte-Carlo noise of any realistic sample size.
pub const SUM_OF_GAMMA_DEFAULT_TERMS: usize = 10;

/// `n` i.i.d. draws from the Sum-of-Gamma distribution with parameter `kappa`,
/// truncated at `terms` summands:
///
/// `(1/kappa) * (sum_{i=1..terms} Gamma(shape=1/kappa, rate=i/kappa) - ln(terms))`
///
/// For `kappa = 1` and large `terms` the law converges to Gumbel(0, 1).
pub fn sample_sum_of_gamma(
    rng: &mut RngStream,
    n: usize,
    kappa: u32,
    terms: usize,
) -> Result<Vec<f64>, NumericsError> {
    if kappa < 1 {
        return Err(NumericsError::InvalidParam("sum-of-gamma: kappa must be >= 1".into()));
    }
    if terms < 1 {
        return Err(NumericsError::InvalidParam("sum-of-gamma: terms must be >= 1".into()));
    }
    let k = kappa as f64;
    let shape = 1.0 / k;
    let gammas: Vec<Gamma<f64>> = (1..=terms)
        .map(|i| Gamma::new(shape, k / i as f64).expect("valid gamma parameters"))
        .collect();
    let log_s = (terms as f64).ln();
    Ok((0..n)
        .map(|_| {
            let sum: f64 = gammas.iter().map(|g| g.sample(rng)).sum();
            (sum - log_s) / k
        })
        .collect())
}

/// Exact mean of the truncated Sum-of-Gamma law, `(H_terms - ln terms) / kappa`.
pub fn sum_of_gamma_mean(kappa: u32, terms: usize) -> f64 {
    let h: f64 = (1..=terms).map(|i| 1.0 / i as f64).sum();
    (h - (terms as f64).ln()) / kappa as f64
}

/// Exact variance of the truncated Sum-of-Gamma law.
pub fn sum_of_gamma_var(kappa: u32, terms: usize) -> f64 {
    let s2: f64 = (1..=terms).map(|i| 1.0 / (i as f64 * i as f64)).sum();
    s2 / kappa as f64
}

/// Normalize to the unit sphere. Inputs with norm below `1e-12` are returned
/// unchanged with the degenerate flag set instead of raising.
pub fn project_unit_sphere(v: &[f64]) -> (Vec<f64>, bool) {
    let n = super::norm2(v);
    if n > 1e-12 {
        (v.iter().map(|x| x / n).collect(), false)
    } else {
        (v.to_vec(), true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn gumbel_rejects_bad_params() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_gumbel(&mut rng, 4, 0.0).is_err());
        assert!(sample_gumbel(&mut rng, 4, -1.0).is_err());
        assert!(sample_gumbel(&mut rng, 0, 1.0).is_err());
    }

    #[test]
    fn gumbel_is_deterministic() {
        let mut a = RngStream::new(11, 2);
        let mut b = RngStream::new(11, 2);
        assert_eq!(sample_gumbel(&mut a, 32, 0.7).unwrap(), sample_gumbel(&mut b, 32, 0.7).unwrap());
    }

    #[test]
    fn gumbel_mean_matches_closed_form() {
        let mut rng = RngStream::new(3, 1);
        let n = 1_000_000;
        let eps = 1.7;
        let draws = sample_gumbel(&mut rng, n, eps).unwrap();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let expected = eps * EULER_GAMMA;
        // var of Gumbel(0, eps) is eps^2 pi^2 / 6
        let sigma_mean = (eps * eps * std::f64::consts::PI.powi(2) / 6.0 / n as f64).sqrt();
        assert!(
            (mean - expected).abs() < 3.0 * sigma_mean,
            "mean {mean} vs expected {expected} (3 sigma {})",
            3.0 * sigma_mean
        );
    }

    #[test]
    fn sum_of_gamma_rejects_bad_params() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_sum_of_gamma(&mut rng, 2, 0, 10).is_err());
        assert!(sample_sum_of_gamma(&mut rng, 2, 1, 0).is_err());
    }

    #[test]
    fn sum_of_gamma_is_deterministic() {
        let mut a = RngStream::new(5, 8);
        let mut b = RngStream::new(5, 8);
        assert_eq!(
            sample_sum_of_gamma(&mut a, 16, 5, 10).unwrap(),
            sample_sum_of_gamma(&mut b, 16, 5, 10).unwrap()
        );
    }

    #[test]
    fn sum_of_gamma_mean_matches_formula() {
        let mut rng = RngStream::new(9, 4);
        let n = 1_000_000;
        let (kappa, terms) = (5, 10);
        let draws = sample_sum_of_gamma(&mut rng, n, kappa, terms).unwrap();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let expected = sum_of_gamma_mean(kappa, terms);
        let sigma_mean = (sum_of_gamma_var(kappa, terms) / n as f64).sqrt();
        assert!(
            (mean - expected).abs() < 3.0 * sigma_mean,
            "mean {mean} vs expected {expected}"
        );
    }

    #[test]
    fn sum_of_gamma_limit_is_gumbel() {
        // kappa = 1 with many terms approaches Gumbel(0,1); compare the
        // empirical CDF against the analytic Gumbel CDF.
        let mut rng = RngStream::new(13, 0);
        let n = 100_000;
        let mut draws = sample_sum_of_gamma(&mut rng, n, 1, 10_000).unwrap();
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gumbel_cdf = |x: f64| (-(-x).exp()).exp();
        let mut ks: f64 = 0.0;
        for (i, x) in draws.iter().enumerate() {
            let f = gumbel_cdf(*x);
            let hi = (i + 1) as f64 / n as f64;
            let lo = i as f64 / n as f64;
            ks = ks.max((hi - f).abs()).max((f - lo).abs());
        }
        assert!(ks < 0.02, "Kolmogorov distance {ks} too large");
    }

    #[test]
    fn unit_sphere_projection() {
        let (v, degenerate) = project_unit_sphere(&[3.0, 4.0]);
        assert!(!degenerate);
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);

        let unit = vec![0.0, 1.0];
        let (w, deg) = project_unit_sphere(&unit);
        assert!(!deg);
        assert_eq!(w, unit);

        let (z, deg) = project_unit_sphere(&[0.0, 0.0, 0.0]);
        assert!(deg);
        assert_eq!(z, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn projected_norm_is_one() {
        let mut rng = RngStream::new(21, 0);
        for _ in 0..50 {
            let v: Vec<f64> = (0..8).map(|_| rng.uniform_in(-5.0, 5.0)).collect();
            if super::super::norm2(&v) <= 1e-12 {
                continue;
            }
            let (p, deg) = project_unit_sphere(&v);
            assert!(!deg);
            assert!((super::super::norm2(&p) - 1.0).abs() <= 1e-12);
        }
    }
}
