//! Dense linear algebra primitives and seeded random streams.
//!
//! Problem sizes across the benchmark suite stay in the low hundreds, so
//! everything here is dense, row-major and allocation-friendly rather than
//! clever.

mod linalg;
mod rng;
mod sampling;

pub use linalg::{solve_linear_system, LuFactors, Matrix};
pub use rng::RngStream;
pub use sampling::{
    project_unit_sphere, sample_gaussian, sample_gumbel, sample_sum_of_gamma, sum_of_gamma_mean,
    sum_of_gamma_var, SUM_OF_GAMMA_DEFAULT_TERMS,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("matrix is singular (pivot {pivot:.3e} below 1e-12 at column {col})")]
    SingularMatrix { col: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid scale: epsilon must be > 0, got {0}")]
    InvalidScale(f64),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

/// Dot product. Panics on length mismatch, which is always a programmer error.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    assert_eq!(x.len(), y.len(), "axpy: length mismatch");
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `a - b` elementwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "sub: length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + b` elementwise.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "add: length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(alpha: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| alpha * x).collect()
}

/// True when every entry is finite.
pub fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}
