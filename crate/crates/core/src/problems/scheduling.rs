use super::{DataError, SchedulingSpec, SchedulingTask};
use crate::numerics::RngStream;
use crate::solvers::{branch_and_bound, build_scheduling_milp, BnbLimits};

const GENERATION_ATTEMPTS: usize = 100;

/// Sample a feasible scheduling instance: task durations, windows and
/// resource usages drawn at random, then certified by one solver call.
/// Retries up to 100 draws before giving up.
pub fn gen_scheduling_instance(
    machines: usize,
    n_tasks: usize,
    slots: usize,
    rng: &mut RngStream,
) -> Result<SchedulingSpec, DataError> {
    if machines < 1 || n_tasks < 1 || slots < 2 {
        return Err(DataError::InvalidParam(
            "need at least 1 machine, 1 task and 2 slots".into(),
        ));
    }
    let resources = 1;
    for attempt in 0..GENERATION_ATTEMPTS {
        let mut tasks = Vec::with_capacity(n_tasks);
        for _ in 0..n_tasks {
            let max_dur = (slots / 3).max(1);
            let duration = 1 + (rng.next_u64() as usize) % max_dur;
            let latest_possible_start = slots - duration;
            let earliest_start = (rng.next_u64() as usize) % (latest_possible_start + 1);
            // Window at least as long as the duration, possibly slack.
            let slack = (rng.next_u64() as usize) % (slots - earliest_start - duration + 1);
            let latest_end = earliest_start + duration + slack;
            let power = 1.0 + (rng.next_u64() % 4) as f64;
            let usage = vec![1.0 + (rng.next_u64() % 2) as f64];
            tasks.push(SchedulingTask { duration, earliest_start, latest_end, power, usage });
        }
        let capacity = vec![vec![2.0 + (rng.next_u64() % 3) as f64; resources]; machines];
        let spec = SchedulingSpec { machines, tasks, capacity, slots };
        spec.validate()?;
        // Certify feasibility with uniform prices.
        let model = build_scheduling_milp(&spec, &vec![1.0; slots]);
        let sol = branch_and_bound(&model, &BnbLimits::default())?;
        if sol.is_optimal() {
            return Ok(spec);
        }
        let _ = attempt;
    }
    Err(DataError::InfeasibleInstance { attempts: GENERATION_ATTEMPTS })
}

use rand::RngCore as _;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::SolveStatus;

    #[test]
    fn generated_instances_are_feasible() {
        for seed in 0..5 {
            let mut rng = RngStream::new(seed, 0);
            let spec = gen_scheduling_instance(2, 5, 12, &mut rng).unwrap();
            assert_eq!(spec.machines, 2);
            assert_eq!(spec.tasks.len(), 5);
            let model = build_scheduling_milp(&spec, &vec![1.0; 12]);
            let sol = branch_and_bound(&model, &BnbLimits::default()).unwrap();
            assert_eq!(sol.status, SolveStatus::Optimal);
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let mut a = RngStream::new(3, 1);
        let mut b = RngStream::new(3, 1);
        let sa = gen_scheduling_instance(2, 4, 10, &mut a).unwrap();
        let sb = gen_scheduling_instance(2, 4, 10, &mut b).unwrap();
        assert_eq!(sa, sb);
    }

    /// Exhaustive oracle for desk-size instances: enumerate every assignment
    /// of (machine, start) per task and keep the cheapest feasible one.
    pub(crate) fn exhaustive_schedule_cost(spec: &SchedulingSpec, prices: &[f64]) -> Option<f64> {
        let mut options: Vec<Vec<(usize, usize, f64)>> = Vec::new();
        for task in &spec.tasks {
            let mut opts = Vec::new();
            for i in 0..spec.machines {
                for t in task.earliest_start..=(task.latest_end - task.duration) {
                    let cost: f64 =
                        (t..t + task.duration).map(|tp| task.power * prices[tp]).sum();
                    opts.push((i, t, cost));
                }
            }
            options.push(opts);
        }
        let mut best: Option<f64> = None;
        let mut choice = vec![0usize; options.len()];
        'outer: loop {
            // Check the capacity of every machine/resource/slot.
            let mut ok = true;
            'check: for i in 0..spec.machines {
                for w in 0..spec.resources() {
                    for t in 0..spec.slots {
                        let mut used = 0.0;
                        for (j, task) in spec.tasks.iter().enumerate() {
                            let (mi, st, _) = options[j][choice[j]];
                            if mi == i && st <= t && t < st + task.duration {
                                used += task.usage[w];
                            }
                        }
                        if used > spec.capacity[i][w] + 1e-9 {
                            ok = false;
                            break 'check;
                        }
                    }
                }
            }
            if ok {
                let total: f64 = (0..options.len()).map(|j| options[j][choice[j]].2).sum();
                best = Some(best.map_or(total, |b: f64| b.min(total)));
            }
            // Next assignment.
            for j in 0..choice.len() {
                choice[j] += 1;
                if choice[j] < options[j].len() {
                    continue 'outer;
                }
                choice[j] = 0;
            }
            break;
        }
        best
    }

    #[test]
    fn milp_matches_exhaustive_enumeration_on_desk_instance() {
        let mut rng = RngStream::new(11, 0);
        let spec = gen_scheduling_instance(2, 4, 8, &mut rng).unwrap();
        for trial in 0..5 {
            let prices: Vec<f64> = (0..8).map(|_| rng.uniform_in(0.5, 4.0)).collect();
            let model = build_scheduling_milp(&spec, &prices);
            let sol = branch_and_bound(&model, &BnbLimits::default()).unwrap();
            let best = exhaustive_schedule_cost(&spec, &prices).expect("feasible");
            assert!(
                (sol.objective - best).abs() < 1e-6,
                "trial {trial}: milp {} vs exhaustive {best}",
                sol.objective
            );
        }
    }
}
