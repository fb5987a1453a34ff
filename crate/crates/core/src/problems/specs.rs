//! Problem-level constants: the data that stays fixed across instances of a
//! benchmark while the cost vector varies.

use crate::numerics::Matrix;
use serde::{Deserialize, Serialize};

use super::DataError;

/// A k x k grid whose edges point north or east only, walked from the
/// southwest to the northeast corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    grid_side: usize,
}

impl GridSpec {
    pub fn new(grid_side: usize) -> Result<Self, DataError> {
        if grid_side < 2 {
            return Err(DataError::InvalidParam("grid side must be >= 2".into()));
        }
        Ok(GridSpec { grid_side })
    }

    pub fn side(&self) -> usize {
        self.grid_side
    }

    /// `2 k (k - 1)` directed edges.
    pub fn edge_count(&self) -> usize {
        2 * self.grid_side * (self.grid_side - 1)
    }

    fn node(&self, row: usize, col: usize) -> usize {
        row * self.grid_side + col
    }

    /// Fixed edge layout: nodes scanned row-major from the southwest corner,
    /// each emitting its east edge first, then its north edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.grid_side;
        let mut edges = Vec::with_capacity(self.edge_count());
        for row in 0..k {
            for col in 0..k {
                if col + 1 < k {
                    edges.push((self.node(row, col), self.node(row, col + 1)));
                }
                if row + 1 < k {
                    edges.push((self.node(row, col), self.node(row + 1, col)));
                }
            }
        }
        edges
    }

    /// Edge index of the east edge out of `(row, col)`, if any.
    pub fn east_edge(&self, row: usize, col: usize) -> Option<usize> {
        if col + 1 >= self.grid_side {
            return None;
        }
        Some(self.edge_base(row, col))
    }

    /// Edge index of the north edge out of `(row, col)`, if any.
    pub fn north_edge(&self, row: usize, col: usize) -> Option<usize> {
        if row + 1 >= self.grid_side {
            return None;
        }
        let base = self.edge_base(row, col);
        if col + 1 < self.grid_side {
            Some(base + 1)
        } else {
            Some(base)
        }
    }

    /// Number of edges emitted by nodes strictly before `(row, col)` in the
    /// row-major scan.
    fn edge_base(&self, row: usize, col: usize) -> usize {
        let k = self.grid_side;
        let mut count = 0;
        // Full rows before this one.
        // A non-top row emits (k-1) east + k north edges; the top row only east.
        if row < k - 1 {
            count += row * (2 * k - 1);
        } else {
            count += (k - 1) * (2 * k - 1);
        }
        // Nodes before this one within the row.
        for c in 0..col {
            if c + 1 < k {
                count += 1;
            }
            if row + 1 < k {
                count += 1;
            }
        }
        count
    }
}

/// The hidden generative model behind a synthetic dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticGroundTruth {
    /// True linear map from features to the pre-nonlinearity cost scores.
    pub mapping: Matrix,
    /// Degree of the polynomial misspecification.
    pub deg: u32,
    /// Multiplicative noise half-width (shortest path) or noise magnitude
    /// (portfolio).
    pub noise: f64,
    /// Feature dimension.
    pub feature_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackSpec {
    weights: Vec<u32>,
    capacity: u32,
}

impl KnapsackSpec {
    /// Weights must be positive integers and the capacity must fit within
    /// their sum.
    pub fn new(weights: &[f64], capacity: u32) -> Result<Self, DataError> {
        let mut w = Vec::with_capacity(weights.len());
        for (i, &v) in weights.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 || v.fract() != 0.0 {
                return Err(DataError::InvalidParam(format!(
                    "knapsack weight {i} must be a positive integer, got {v}"
                )));
            }
            w.push(v as u32);
        }
        let total: u32 = w.iter().sum();
        if capacity == 0 || capacity > total {
            return Err(DataError::InvalidParam(format!(
                "capacity must satisfy 0 < capacity <= {total}, got {capacity}"
            )));
        }
        Ok(KnapsackSpec { weights: w, capacity })
    }

    pub fn from_integer_weights(weights: Vec<u32>, capacity: u32) -> Result<Self, DataError> {
        let floats: Vec<f64> = weights.iter().map(|&w| w as f64).collect();
        Self::new(&floats, capacity)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn item_count(&self) -> usize {
        self.weights.len()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PortfolioSpec {
    /// Covariance of asset returns, symmetric PSD.
    pub sigma: Matrix,
    /// Risk bound.
    pub gamma: f64,
    /// Asset count.
    pub assets: usize,
    /// Set when the generator produced a zero covariance (zero noise), which
    /// makes the risk constraint vacuous.
    pub degenerate_risk: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchedulingTask {
    pub duration: usize,
    pub earliest_start: usize,
    pub latest_end: usize,
    pub power: f64,
    /// Resource usage per resource kind.
    pub usage: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchedulingSpec {
    pub machines: usize,
    pub tasks: Vec<SchedulingTask>,
    /// Capacity per machine per resource kind, `machines x resources` row-major.
    pub capacity: Vec<Vec<f64>>,
    pub slots: usize,
}

impl SchedulingSpec {
    pub fn validate(&self) -> Result<(), DataError> {
        for (j, t) in self.tasks.iter().enumerate() {
            if t.earliest_start + t.duration > t.latest_end || t.latest_end > self.slots {
                return Err(DataError::InvalidParam(format!(
                    "task {j} has no feasible window: start {} + duration {} vs latest end {} (horizon {})",
                    t.earliest_start, t.duration, t.latest_end, self.slots
                )));
            }
            if t.duration == 0 {
                return Err(DataError::InvalidParam(format!("task {j} has zero duration")));
            }
        }
        if self.capacity.len() != self.machines {
            return Err(DataError::InvalidParam("capacity rows must match machine count".into()));
        }
        Ok(())
    }

    pub fn resources(&self) -> usize {
        self.capacity.first().map_or(0, |c| c.len())
    }

    pub fn var_count(&self) -> usize {
        self.tasks.len() * self.machines * self.slots
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingSpec {
    /// Nodes per side.
    pub n: usize,
    /// Same-field indicator per (left, right) pair, row-major.
    pub same_field: Vec<u8>,
    pub rho1: f64,
    pub rho2: f64,
}

impl MatchingSpec {
    pub fn new(n: usize, same_field: Vec<u8>, rho1: f64, rho2: f64) -> Result<Self, DataError> {
        if same_field.len() != n * n {
            return Err(DataError::InvalidParam("same_field must have n*n entries".into()));
        }
        if !(0.0..=1.0).contains(&rho1) || !(0.0..=1.0).contains(&rho2) {
            return Err(DataError::InvalidParam("diversity fractions must lie in [0,1]".into()));
        }
        Ok(MatchingSpec { n, same_field, rho1, rho2 })
    }

    pub fn phi(&self, i: usize, j: usize) -> f64 {
        self.same_field[i * self.n + j] as f64
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopKSpec {
    pub n: usize,
    pub k: usize,
}

impl TopKSpec {
    pub fn new(n: usize, k: usize) -> Result<Self, DataError> {
        if k == 0 || k > n {
            return Err(DataError::InvalidParam(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(TopKSpec { n, k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_edge_layout_2x2() {
        let g = GridSpec::new(2).unwrap();
        assert_eq!(g.edge_count(), 4);
        // Node (0,0) at the southwest corner emits east then north.
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(g.east_edge(0, 0), Some(0));
        assert_eq!(g.north_edge(0, 0), Some(1));
        assert_eq!(g.north_edge(0, 1), Some(2));
        assert_eq!(g.east_edge(1, 0), Some(3));
        assert_eq!(g.east_edge(1, 1), None);
        assert_eq!(g.north_edge(1, 1), None);
    }

    #[test]
    fn grid_edge_layout_consistency() {
        for k in 2..=6 {
            let g = GridSpec::new(k).unwrap();
            let edges = g.edges();
            assert_eq!(edges.len(), g.edge_count());
            for row in 0..k {
                for col in 0..k {
                    if let Some(e) = g.east_edge(row, col) {
                        assert_eq!(edges[e], (row * k + col, row * k + col + 1));
                    }
                    if let Some(e) = g.north_edge(row, col) {
                        assert_eq!(edges[e], (row * k + col, (row + 1) * k + col));
                    }
                }
            }
        }
    }

    #[test]
    fn knapsack_spec_validates() {
        assert!(KnapsackSpec::new(&[3.0, 5.0, 7.0], 10).is_ok());
        assert!(KnapsackSpec::new(&[3.5, 5.0], 5).is_err());
        assert!(KnapsackSpec::new(&[3.0, 5.0], 9).is_err());
        assert!(KnapsackSpec::new(&[3.0, -5.0], 2).is_err());
    }

    #[test]
    fn topk_spec_validates() {
        assert!(TopKSpec::new(10, 2).is_ok());
        assert!(TopKSpec::new(10, 0).is_err());
        assert!(TopKSpec::new(10, 11).is_err());
    }
}
