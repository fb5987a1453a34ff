//! MILP formulations of the scheduling and diverse-matching benchmarks.

use super::{LinearProgram, MilpModel, RowKind, Sense};
use crate::numerics::Matrix;
use crate::problems::{MatchingSpec, SchedulingSpec};

/// Energy-cost aware scheduling as a MILP over binary start indicators
/// `x[task][machine][slot]`.
///
/// The objective charges each start its power draw over the task's duration;
/// every task is scheduled exactly once; window constraints pin the start
/// variables outside `[earliest_start, latest_end - duration]` to zero via
/// their bounds; machine resource capacities hold at every time slot.
pub fn build_scheduling_milp(spec: &SchedulingSpec, prices: &[f64]) -> MilpModel {
    assert_eq!(prices.len(), spec.slots, "need one price per time slot");
    let (machines, slots) = (spec.machines, spec.slots);
    let n = spec.var_count();
    let var = |j: usize, i: usize, t: usize| (j * machines + i) * slots + t;

    let mut objective = vec![0.0; n];
    let mut bounds = vec![(0.0, 1.0); n];
    for (j, task) in spec.tasks.iter().enumerate() {
        for i in 0..machines {
            for t in 0..slots {
                let feasible = t >= task.earliest_start && t + task.duration <= task.latest_end;
                if feasible {
                    let energy: f64 =
                        (t..t + task.duration).map(|tp| task.power * prices[tp]).sum();
                    objective[var(j, i, t)] = energy;
                } else {
                    bounds[var(j, i, t)] = (0.0, 0.0);
                }
            }
        }
    }

    let resources = spec.resources();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut kinds = Vec::new();
    let mut rhs = Vec::new();

    // Each task runs once and only once.
    for j in 0..spec.tasks.len() {
        let mut row = vec![0.0; n];
        for i in 0..machines {
            for t in 0..slots {
                row[var(j, i, t)] = 1.0;
            }
        }
        rows.push(row);
        kinds.push(RowKind::Eq);
        rhs.push(1.0);
    }

    // Resource capacity per machine, resource and slot: a task started in
    // (t - duration, t] is still running at t.
    for i in 0..machines {
        for w in 0..resources {
            for t in 0..slots {
                let mut row = vec![0.0; n];
                let mut nonzero = false;
                for (j, task) in spec.tasks.iter().enumerate() {
                    if task.usage[w] == 0.0 {
                        continue;
                    }
                    let from = (t + 1).saturating_sub(task.duration);
                    for tp in from..=t {
                        if tp < slots {
                            row[var(j, i, tp)] = task.usage[w];
                            nonzero = true;
                        }
                    }
                }
                if nonzero {
                    rows.push(row);
                    kinds.push(RowKind::Le);
                    rhs.push(spec.capacity[i][w]);
                }
            }
        }
    }

    let lp = LinearProgram::new(Sense::Min, objective, Matrix::from_rows(&rows), kinds, rhs, bounds);
    MilpModel::new(lp, (0..n).collect())
}

/// Diverse bipartite matching as a MILP over binary edge indicators.
///
/// Degree constraints cap each node at one selected edge; the diversity
/// rows require at least `rho1` of the selected edges to share a field and
/// at least `rho2` to cross fields.
pub fn build_matching_milp(spec: &MatchingSpec, likelihoods: &[f64]) -> MilpModel {
    let n = spec.n;
    assert_eq!(likelihoods.len(), n * n, "need one likelihood per node pair");

    let nv = n * n;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut kinds = Vec::new();
    let mut rhs = Vec::new();

    for i in 0..n {
        let mut row = vec![0.0; nv];
        for j in 0..n {
            row[i * n + j] = 1.0;
        }
        rows.push(row);
        kinds.push(RowKind::Le);
        rhs.push(1.0);
    }
    for j in 0..n {
        let mut row = vec![0.0; nv];
        for i in 0..n {
            row[i * n + j] = 1.0;
        }
        rows.push(row);
        kinds.push(RowKind::Le);
        rhs.push(1.0);
    }
    // sum phi x >= rho1 sum x  and  sum (1 - phi) x >= rho2 sum x.
    let mut same = vec![0.0; nv];
    let mut diff = vec![0.0; nv];
    for i in 0..n {
        for j in 0..n {
            let phi = spec.phi(i, j);
            same[i * n + j] = phi - spec.rho1;
            diff[i * n + j] = (1.0 - phi) - spec.rho2;
        }
    }
    rows.push(same);
    kinds.push(RowKind::Ge);
    rhs.push(0.0);
    rows.push(diff);
    kinds.push(RowKind::Ge);
    rhs.push(0.0);

    let lp = LinearProgram::new(
        Sense::Max,
        likelihoods.to_vec(),
        Matrix::from_rows(&rows),
        kinds,
        rhs,
        vec![(0.0, 1.0); nv],
    );
    MilpModel::new(lp, (0..nv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::SchedulingTask;
    use crate::solvers::{branch_and_bound, branch_and_bound_with_stats, BnbLimits, SolveStatus};

    fn one_task_spec(duration: usize, earliest: usize, latest: usize, slots: usize) -> SchedulingSpec {
        SchedulingSpec {
            machines: 1,
            tasks: vec![SchedulingTask {
                duration,
                earliest_start: earliest,
                latest_end: latest,
                power: 1.0,
                usage: vec![1.0],
            }],
            capacity: vec![vec![1.0]],
            slots,
        }
    }

    #[test]
    fn single_task_picks_cheapest_start() {
        let spec = one_task_spec(1, 0, 3, 3);
        let m = build_scheduling_milp(&spec, &[5.0, 1.0, 3.0]);
        let sol = branch_and_bound(&m, &BnbLimits::default()).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert_eq!(sol.x[1], 1.0);
    }

    #[test]
    fn uniform_prices_tie_break_deterministically() {
        // Duration 2 over horizon 3 leaves two feasible starts with equal cost.
        let spec = one_task_spec(2, 0, 3, 3);
        let m = build_scheduling_milp(&spec, &[2.0, 2.0, 2.0]);
        let a = branch_and_bound(&m, &BnbLimits::default()).unwrap();
        let b = branch_and_bound(&m, &BnbLimits::default()).unwrap();
        assert_eq!(a, b);
        assert!((a.objective - 4.0).abs() < 1e-9);
    }

    #[test]
    fn pinned_window_leaves_one_start() {
        // earliest = latest_end - duration pins the start slot.
        let spec = one_task_spec(2, 1, 3, 4);
        let m = build_scheduling_milp(&spec, &[0.0, 9.0, 1.0, 0.0]);
        let free: Vec<usize> =
            (0..4).filter(|&t| m.lp.bounds[t] != (0.0, 0.0)).collect();
        assert_eq!(free, vec![1]);
    }

    #[test]
    fn overlapping_tasks_on_tight_capacity_infeasible() {
        let spec = SchedulingSpec {
            machines: 1,
            tasks: vec![
                SchedulingTask {
                    duration: 2,
                    earliest_start: 0,
                    latest_end: 2,
                    power: 1.0,
                    usage: vec![1.0],
                },
                SchedulingTask {
                    duration: 2,
                    earliest_start: 0,
                    latest_end: 2,
                    power: 1.0,
                    usage: vec![1.0],
                },
            ],
            capacity: vec![vec![1.0]],
            slots: 2,
        };
        let m = build_scheduling_milp(&spec, &[1.0, 1.0]);
        let sol = branch_and_bound(&m, &BnbLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn plain_matching_is_integral_at_root() {
        let spec = MatchingSpec::new(3, vec![0; 9], 0.0, 0.0).unwrap();
        let likes = vec![0.9, 0.1, 0.2, 0.3, 0.8, 0.1, 0.2, 0.4, 0.7];
        let m = build_matching_milp(&spec, &likes);
        let (sol, stats) = branch_and_bound_with_stats(&m, &BnbLimits::default()).unwrap();
        assert_eq!(stats.branched, 0, "assignment polytope is integral");
        assert!((sol.objective - 2.4).abs() < 1e-9);
    }

    #[test]
    fn all_same_field_with_rho2_forces_empty_matching() {
        let spec = MatchingSpec::new(2, vec![1; 4], 0.0, 0.5).unwrap();
        let m = build_matching_milp(&spec, &[0.9, 0.8, 0.7, 0.6]);
        let sol = branch_and_bound(&m, &BnbLimits::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!(sol.objective.abs() < 1e-9);
        assert!(sol.x.iter().all(|&v| v == 0.0));
    }
}
