use crate::numerics::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Eq,
    Ge,
}

impl RowKind {
    fn symbol(&self) -> &'static str {
        match self {
            RowKind::Le => "<=",
            RowKind::Eq => "=",
            RowKind::Ge => ">=",
        }
    }
}

/// A dense linear program: optimize `c^T x` subject to row constraints and
/// per-variable bounds. Lower bounds must be finite; upper bounds may be
/// `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Matrix,
    pub row_kinds: Vec<RowKind>,
    pub rhs: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(
        sense: Sense,
        objective: Vec<f64>,
        rows: Matrix,
        row_kinds: Vec<RowKind>,
        rhs: Vec<f64>,
        bounds: Vec<(f64, f64)>,
    ) -> Self {
        assert_eq!(rows.cols(), objective.len(), "objective length must match columns");
        assert_eq!(rows.rows(), rhs.len(), "rhs length must match rows");
        assert_eq!(rows.rows(), row_kinds.len(), "row kinds must match rows");
        assert_eq!(bounds.len(), objective.len(), "bounds must match variables");
        for (j, &(lo, hi)) in bounds.iter().enumerate() {
            assert!(lo.is_finite(), "variable {j}: lower bound must be finite");
            assert!(lo <= hi, "variable {j}: lower bound above upper bound");
        }
        LinearProgram { sense, objective, rows, row_kinds, rhs, bounds }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    /// Max feasibility violation of `x` over rows and bounds.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let ax = self.rows.matvec(x);
        let mut v: f64 = 0.0;
        for (i, kind) in self.row_kinds.iter().enumerate() {
            let d = ax[i] - self.rhs[i];
            v = match kind {
                RowKind::Le => v.max(d),
                RowKind::Ge => v.max(-d),
                RowKind::Eq => v.max(d.abs()),
            };
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            v = v.max(lo - x[j]);
            if hi.is_finite() {
                v = v.max(x[j] - hi);
            }
        }
        v.max(0.0)
    }

    /// Plain-text dump for debugging: objective line, constraint rows, bounds.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let sense = if self.sense == Sense::Min { "min" } else { "max" };
        out.push_str(&format!("{sense} {}\n", terms(&self.objective)));
        for i in 0..self.num_rows() {
            out.push_str(&format!(
                "  {} {} {}\n",
                terms(self.rows.row(i)),
                self.row_kinds[i].symbol(),
                self.rhs[i]
            ));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if hi.is_finite() {
                out.push_str(&format!("  {lo} <= x{j} <= {hi}\n"));
            } else {
                out.push_str(&format!("  x{j} >= {lo}\n"));
            }
        }
        out
    }
}

fn terms(coeffs: &[f64]) -> String {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(j, c)| format!("{c:+}*x{j}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A linear program plus the set of integer-constrained variable indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub lp: LinearProgram,
    pub integers: Vec<usize>,
}

impl MilpModel {
    pub fn new(lp: LinearProgram, mut integers: Vec<usize>) -> Self {
        integers.sort_unstable();
        integers.dedup();
        if let Some(&last) = integers.last() {
            assert!(last < lp.num_vars(), "integer index out of range");
        }
        MilpModel { lp, integers }
    }

    pub fn dump(&self) -> String {
        let mut out = self.lp.dump();
        if !self.integers.is_empty() {
            let list =
                self.integers.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("  integer {list}\n"));
        }
        out
    }
}
