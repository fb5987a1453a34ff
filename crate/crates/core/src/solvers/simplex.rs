//! Two-phase primal simplex on a dense tableau with Bland's anti-cycling
//! rule. Bland's rule is slower than steepest-edge style pivoting but it
//! terminates on every input and, just as important here, pivots
//! deterministically, so repeated solves of the same LP are bitwise equal.

use super::{LinearProgram, RowKind, Sense, Solution, SolveStatus};

const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;

struct Tableau {
    /// m x (cols + 1); last column is the rhs.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, (cols + 1) wide; last entry is -objective.
    cost: Vec<f64>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    cols: usize,
}

enum PivotOutcome {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.cols]
    }

    /// Install a fresh objective and eliminate the basic columns from it.
    fn set_costs(&mut self, costs: &[f64]) {
        self.cost = costs.to_vec();
        self.cost.push(0.0);
        for i in 0..self.rows.len() {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..=self.cols {
                    self.cost[j] -= cb * self.rows[i][j];
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let scale = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= scale;
        }
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor != 0.0 {
                for j in 0..=self.cols {
                    self.rows[i][j] -= factor * self.rows[row][j];
                }
                self.rows[i][col] = 0.0;
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for j in 0..=self.cols {
                self.cost[j] -= factor * self.rows[row][j];
            }
            self.cost[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Run simplex iterations under Bland's rule until optimal or unbounded.
    fn run(&mut self, allowed_cols: usize) -> PivotOutcome {
        loop {
            // Bland: entering variable is the lowest-index improving column.
            let entering = (0..allowed_cols).find(|&j| self.cost[j] < -COST_TOL);
            let Some(entering) = entering else {
                return PivotOutcome::Optimal;
            };
            // Ratio test; ties resolved toward the smallest basic index.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][entering];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((best_i, best_r)) => {
                            if ratio < best_r - 1e-12
                                || (ratio <= best_r + 1e-12 && self.basis[i] < self.basis[best_i])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, entering),
                None => return PivotOutcome::Unbounded { entering },
            }
        }
    }
}

/// Solve an LP by two-phase primal simplex.
///
/// Infeasible and unbounded problems are reported through the solution
/// status rather than an error. Optimal solutions satisfy all rows and
/// bounds to `1e-8`.
pub fn simplex_solve(lp: &LinearProgram) -> Solution {
    let n = lp.num_vars();
    // Work on the shifted variables y = x - lo >= 0 and minimize.
    let obj_sign = if lp.sense == Sense::Max { -1.0 } else { 1.0 };
    let lo: Vec<f64> = lp.bounds.iter().map(|b| b.0).collect();

    // Collect working rows: original constraints with shifted rhs, then
    // upper-bound rows y_j <= hi_j - lo_j.
    let a_lo = lp.rows.matvec(&lo);
    let mut work: Vec<(Vec<f64>, RowKind, f64)> = Vec::new();
    for i in 0..lp.num_rows() {
        work.push((lp.rows.row(i).to_vec(), lp.row_kinds[i], lp.rhs[i] - a_lo[i]));
    }
    for (j, &(lo_j, hi_j)) in lp.bounds.iter().enumerate() {
        if hi_j.is_finite() {
            let mut row = vec![0.0; n];
            row[j] = 1.0;
            work.push((row, RowKind::Le, hi_j - lo_j));
        }
    }
    // Normalize to non-negative rhs.
    for (row, kind, rhs) in work.iter_mut() {
        if *rhs < 0.0 {
            for v in row.iter_mut() {
                *v = -*v;
            }
            *rhs = -*rhs;
            *kind = match *kind {
                RowKind::Le => RowKind::Ge,
                RowKind::Ge => RowKind::Le,
                RowKind::Eq => RowKind::Eq,
            };
        }
    }

    let m = work.len();
    let n_slack = work.iter().filter(|w| w.1 != RowKind::Eq).count();
    let n_art = work.iter().filter(|w| w.1 != RowKind::Le).count();
    let cols = n + n_slack + n_art;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    let mut slack_at = n;
    let mut art_at = n + n_slack;
    let mut artificial_cols: Vec<usize> = Vec::new();
    for (i, (coeffs, kind, rhs)) in work.iter().enumerate() {
        let mut row = vec![0.0; cols + 1];
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match kind {
            RowKind::Le => {
                row[slack_at] = 1.0;
                basis[i] = slack_at;
                slack_at += 1;
            }
            RowKind::Ge => {
                row[slack_at] = -1.0;
                slack_at += 1;
                row[art_at] = 1.0;
                basis[i] = art_at;
                artificial_cols.push(art_at);
                art_at += 1;
            }
            RowKind::Eq => {
                row[art_at] = 1.0;
                basis[i] = art_at;
                artificial_cols.push(art_at);
                art_at += 1;
            }
        }
        rows.push(row);
    }

    let mut tab = Tableau { rows, cost: Vec::new(), basis, cols };

    // Phase 1: minimize the sum of artificials.
    if !artificial_cols.is_empty() {
        let mut phase1 = vec![0.0; cols];
        for &j in &artificial_cols {
            phase1[j] = 1.0;
        }
        tab.set_costs(&phase1);
        match tab.run(cols) {
            PivotOutcome::Optimal => {}
            PivotOutcome::Unbounded { .. } => unreachable!("phase 1 is bounded below by zero"),
        }
        let phase1_obj = -tab.cost[cols];
        if phase1_obj > PHASE1_TOL {
            return Solution::infeasible(n);
        }
        // Drive basic artificials out; rows where that is impossible are
        // redundant and get dropped.
        let art_start = n + n_slack;
        let mut keep = vec![true; tab.rows.len()];
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= art_start {
                let col = (0..art_start).find(|&j| tab.rows[i][j].abs() > PIVOT_TOL);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => keep[i] = false,
                }
            }
        }
        let mut filtered_rows = Vec::new();
        let mut filtered_basis = Vec::new();
        for (i, k) in keep.iter().enumerate() {
            if *k {
                filtered_rows.push(std::mem::take(&mut tab.rows[i]));
                filtered_basis.push(tab.basis[i]);
            }
        }
        tab.rows = filtered_rows;
        tab.basis = filtered_basis;
    }

    // Phase 2 on the real objective; artificial columns are off limits.
    let allowed = n + n_slack;
    let mut phase2 = vec![0.0; cols];
    for j in 0..n {
        phase2[j] = obj_sign * lp.objective[j];
    }
    tab.set_costs(&phase2);
    if let PivotOutcome::Unbounded { .. } = tab.run(allowed) {
        return Solution::unbounded(n);
    }

    let mut x = lo;
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] += tab.rhs(i);
        }
    }
    let objective = crate::numerics::dot(&lp.objective, &x);
    Solution { x, objective, status: SolveStatus::Optimal }
}
